#pragma once

#include "wulff_lab/error.hpp"
#include "wulff_lab/parallel.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/field_io.hpp"
#include "wulff_lab/random.hpp"
#include "wulff_lab/quad1d.hpp"
#include "wulff_lab/radial.hpp"
#include "wulff_lab/weights.hpp"
#include "wulff_lab/potential.hpp"
#include "wulff_lab/rearrangement.hpp"
#include "wulff_lab/young.hpp"
#include "wulff_lab/campanato.hpp"
#include "wulff_lab/plaplace.hpp"
#include "wulff_lab/report.hpp"
#include "wulff_lab/config.hpp"
#include "wulff_lab/heatmap.hpp"
#include "wulff_lab/lab/common.hpp"
#include "wulff_lab/lab/pairs.hpp"
#include "wulff_lab/lab/main_estimates.hpp"
#include "wulff_lab/lab/lemmas.hpp"
#include "wulff_lab/lab/potentials.hpp"
#include "wulff_lab/lab/orlicz.hpp"
#include "wulff_lab/lab/regularity.hpp"
#include "wulff_lab/runner.hpp"
