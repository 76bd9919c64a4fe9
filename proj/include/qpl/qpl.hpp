#pragma once

#include "qpl/errors.hpp"
#include "qpl/rational.hpp"
#include "qpl/matrix.hpp"
#include "qpl/tpoly.hpp"
#include "qpl/painleve.hpp"
#include "qpl/rational_matrix_function.hpp"
#include "qpl/hamiltonians.hpp"
#include "qpl/ode.hpp"
#include "qpl/quadrature.hpp"
#include "qpl/weights.hpp"
#include "qpl/hypergeom.hpp"
#include "qpl/kz.hpp"
