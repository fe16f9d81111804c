#pragma once

// Small named modules used by examples, instances and tests.

#include "modkit/module.hpp"

namespace modkit {

/// C^d = L(C, C^d) over the scalars.
ConcreteModule column_module(Index d, const Tolerances& tol = {});

/// C^n = L(C^n, C) over M_n.
ConcreteModule row_module(Index n, const Tolerances& tol = {});

/// M_n = L(C^n, C^n) over M_n.
ConcreteModule full_matrix_module(Index n, const Tolerances& tol = {});

}  // namespace modkit
