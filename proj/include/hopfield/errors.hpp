#pragma once

#include <stdexcept>
#include <string>

namespace hopfield {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter outside its admissible range (omega_c <= 0, negative couplings, ...).
struct InvalidParams : Error {
    using Error::Error;
};

// |lambda_2| >= 1: the squeezing step of the diagonalization chain is undefined
// (effective negative masses).
struct InvalidSqueezing : Error {
    using Error::Error;
};

// omega_y^2 < 0: Hamiltonian unbounded from below, requested quantity undefined.
struct UnstablePhase : Error {
    using Error::Error;
};

// omega_y = 0: requested closed form is singular at the transition.
struct CriticalPhase : Error {
    using Error::Error;
};

// Operation requires g1 == g2.
struct NotIsotropic : Error {
    using Error::Error;
};

struct QuadratureNotConverged : Error {
    using Error::Error;
};

struct GridTooCoarse : Error {
    using Error::Error;
};

// csc argument within tolerance of a multiple of pi (QFI continuation).
struct PoleAt : Error {
    PoleAt(const std::string& msg, double coupling, int index)
        : Error(msg), g(coupling), n(index) {}
    double g;  // coupling at which the pole was hit
    int n;     // pole index
};

struct CutoffTooLarge : Error {
    using Error::Error;
};

struct TailNotConverged : Error {
    using Error::Error;
};

}  // namespace hopfield
