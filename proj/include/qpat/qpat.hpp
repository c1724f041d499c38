#pragma once

#include "qpat/adjoint.hpp"
#include "qpat/config.hpp"
#include "qpat/errors.hpp"
#include "qpat/forward.hpp"
#include "qpat/grid.hpp"
#include "qpat/metrics.hpp"
#include "qpat/model.hpp"
#include "qpat/objective.hpp"
#include "qpat/pgm.hpp"
#include "qpat/phantom.hpp"
#include "qpat/pipeline.hpp"
#include "qpat/pointwise.hpp"
#include "qpat/qgrid_io.hpp"
#include "qpat/sqh.hpp"
#include "qpat/synth.hpp"
