#ifndef KREINSPEC_ERRORS_HPP
#define KREINSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kreinspec {

// Base class for everything this library throws on contract violations.
// Reports (PASS/FAIL result objects) never throw; preconditions do.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Input claimed Hermitian but ‖M − M*‖ exceeds the tolerance; message names the norm.
class NonHermitianError : public Error {
public:
    NonHermitianError(const std::string& what, double residual, double tol)
        : Error(what + ": hermiticity residual " + std::to_string(residual) +
                " exceeds tolerance " + std::to_string(tol)),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Numerically singular solve; carries the offending pivot magnitude.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double pivot)
        : Error(what + ": smallest pivot magnitude " + std::to_string(pivot)), pivot_(pivot) {}
    double pivot_magnitude() const { return pivot_; }

private:
    double pivot_;
};

// Condition estimate above the configured cap (resolvent point too close to spectrum).
class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& what, double cond, double cap)
        : Error(what + ": condition estimate " + std::to_string(cond) + " exceeds cap " +
                std::to_string(cap)) {}
};

// Eigenvalue iteration failed to converge; carries the iteration count.
class EigenConvergenceError : public Error {
public:
    EigenConvergenceError(const std::string& what, int iterations)
        : Error(what + ": no convergence after " + std::to_string(iterations) + " iterations"),
          iterations_(iterations) {}
    int iterations() const { return iterations_; }

private:
    int iterations_;
};

// Riesz contour cannot isolate the requested cluster.
class ClusterSeparationError : public Error {
public:
    using Error::Error;
};

// Quadrature refinement hit the node cap; carries the last delta.
class QuadratureConvergenceError : public Error {
public:
    QuadratureConvergenceError(const std::string& what, double last_delta, int nodes)
        : Error(what + ": delta " + std::to_string(last_delta) + " at node cap " +
                std::to_string(nodes)),
          last_delta_(last_delta) {}
    double last_delta() const { return last_delta_; }

private:
    double last_delta_;
};

// Violated operation precondition (wrong argument domain, not a numerics failure).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Malformed input file / config.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace kreinspec

#endif
