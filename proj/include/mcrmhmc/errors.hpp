#pragma once

#include <stdexcept>
#include <string>

namespace mcrmhmc {

// Invalid sparse structure (missing diagonal, unsorted indices, ...).
struct StructureError : std::runtime_error {
    explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

// Zero pivot met while applying diag(D)^{-1}.
struct SingularSolveError : std::runtime_error {
    explicit SingularSolveError(const std::string& what) : std::runtime_error(what) {}
};

// D_jj <= 0 inside the exempt prefix (index is 0-based).
struct PdPrefixError : std::runtime_error {
    int index;
    explicit PdPrefixError(int idx)
        : std::runtime_error("PD-prefix violated at index " + std::to_string(idx + 1)),
          index(idx) {}
};

// Post-warmup PD-prefix violation: the chain must be restarted with reduced K.
struct RestartRequiredError : std::runtime_error {
    int suggested_k;
    explicit RestartRequiredError(int k)
        : std::runtime_error("restart required with K = " + std::to_string(k)), suggested_k(k) {}
};

// Divergence with no active regularization parameter left to escalate (K = d).
struct UnrecoverableDivergenceError : std::runtime_error {
    UnrecoverableDivergenceError()
        : std::runtime_error("divergence with K = d: no active regularization parameter") {}
};

struct DegenerateChainError : std::runtime_error {
    explicit DegenerateChainError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcrmhmc
