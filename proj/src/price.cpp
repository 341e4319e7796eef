#include "cfmm/price.hpp"

#include <cmath>
#include <cstdio>

#include "cfmm/errors.hpp"

namespace cfmm {

double ExtendedPrice::value() const {
    if (infinite_) throw DomainError("price is the infinity marker and has no finite value");
    return value_;
}

std::string ExtendedPrice::to_string() const {
    return infinite_ ? std::string("inf") : format_number(value_);
}

PriceInterval::PriceInterval(double alpha, ExtendedPrice beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw InvalidParameter("interval: alpha must be finite and >= 0, got " + format_number(alpha));
    if (beta.is_finite()) {
        const double b = beta.value();
        if (!std::isfinite(b)) throw InvalidParameter("interval: beta must be finite or the inf marker");
        if (b < alpha)
            throw InvalidParameter("interval: need alpha <= beta, got [" + format_number(alpha) + ", " +
                                   format_number(b) + "]");
    }
}

bool PriceInterval::contains(double p) const noexcept {
    return p >= alpha_ && (beta_.is_infinite() || p <= beta_.value());
}

double PriceInterval::clamp(double p) const noexcept {
    if (p < alpha_) return alpha_;
    if (beta_.is_finite() && p > beta_.value()) return beta_.value();
    return p;
}

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace cfmm
