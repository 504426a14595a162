#pragma once

#include "onedatom/applications.hpp"
#include "onedatom/csv.hpp"
#include "onedatom/dynamics.hpp"
#include "onedatom/errors.hpp"
#include "onedatom/grid.hpp"
#include "onedatom/linear.hpp"
#include "onedatom/model.hpp"
#include "onedatom/nonlinear.hpp"
#include "onedatom/ode.hpp"
#include "onedatom/parallel.hpp"
#include "onedatom/pillar.hpp"
