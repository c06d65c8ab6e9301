#pragma once

#include "pvem/element.hpp"

#include <string>

namespace pvem {

/// Exact solution / forcing pair for (-Lap)^m u = f on the unit square.
struct ManufacturedSolution {
    std::string name;
    ScalarField u;
    ScalarField f;
    bool homogeneous_bc = true;

    /// Finite-difference spot check of (-Lap)^m u against f at interior
    /// points (relative tolerance 1e-4); throws on mismatch.
    void check_consistency(int m) const;
};

/// u = (sin(pi x) sin(pi y))^p: all normal derivatives up to order p-1
/// vanish on the boundary of the unit square, so the clamped conditions
/// hold exactly when p = m. Derivatives and f = (-Lap)^m u are evaluated
/// through the exact trigonometric expansion.
ManufacturedSolution trig_solution(int power, int m);

/// Identically zero solution (f = 0).
ManufacturedSolution zero_solution();

/// Lookup by CLI name: "sinm" / "sin<k>" / "zero".
ManufacturedSolution solution_by_name(const std::string& name, int m);

} // namespace pvem
