#pragma once

#include <stdexcept>

namespace relkit {

/// Thresholds governing every numerical decision in the library.
///
/// All boolean answers (operator? singular? contained?) derive from the same
/// relative singular-value cutoff `rank_rtol`, so classifications stay
/// tolerance-consistent across modules.
struct tolerance_config {
    double rank_rtol = 1e-10;  ///< relative singular-value cutoff for rank decisions
    double orth      = 1e-10;  ///< orthonormality slack for frames
    double eq        = 1e-8;   ///< projector-gap threshold for subspace equality
    double contain   = 1e-8;   ///< containment slack
    double metric    = 1e-6;   ///< slack for values obtained from nested optimization
    double oracle    = 1e-6;   ///< slack for limit-oracle comparisons

    void validate() const {
        auto ok = [](double x) { return x > 0.0 && x < 1.0; };
        if (!(ok(rank_rtol) && ok(orth) && ok(eq) && ok(contain) && ok(metric) && ok(oracle)))
            throw std::invalid_argument("tolerance_config: all thresholds must lie in (0, 1)");
    }
};

}  // namespace relkit
