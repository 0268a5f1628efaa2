#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace relkit {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs with incompatible shapes or ambient dimensions.
class dimension_mismatch : public error {
public:
    using error::error;
};

/// A projector that cannot generate an orthogonal range split
/// (its range does not leave the multivalued part invariant).
class invalid_projector : public error {
public:
    using error::error;
};

/// A candidate subspace failed one of the admissibility conditions of a
/// (weak) Lebesgue type split. `clause()` names the failing condition.
class condition_violation : public error {
public:
    condition_violation(std::string clause, const std::string& what)
        : error(what), clause_(std::move(clause)) {}
    const std::string& clause() const { return clause_; }

private:
    std::string clause_;
};

class not_singular : public error {
public:
    using error::error;
};

class not_regular : public error {
public:
    using error::error;
};

class not_orthogonal : public error {
public:
    using error::error;
};

class monotonicity_violation : public error {
public:
    using error::error;
};

class not_in_graph : public error {
public:
    using error::error;
};

class outside_domain : public error {
public:
    using error::error;
};

class not_psd : public error {
public:
    using error::error;
};

/// Limit oracle failed to converge; carries the last gap observed.
class no_convergence : public error {
public:
    no_convergence(const std::string& what, double gap) : error(what), gap_(gap) {}
    double gap() const { return gap_; }

private:
    double gap_ = 0.0;
};

/// Two characterizations that are provably equivalent disagreed numerically.
/// Signals tolerance breakdown, never a mathematical state.
class internal_consistency : public error {
public:
    using error::error;
};

/// A domination witness no longer certifies the pair it was built for.
class stale_witness : public error {
public:
    using error::error;
};

}  // namespace relkit
