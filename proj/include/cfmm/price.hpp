#pragma once

#include <optional>
#include <string>

namespace cfmm {

/// A nonnegative price that may also be the +infinity marker.
///
/// The marker never participates in arithmetic: `value()` throws on it, and
/// callers branch on `is_infinite()` instead.
class ExtendedPrice {
public:
    constexpr ExtendedPrice(double value) : value_(value), infinite_(false) {}  // NOLINT: implicit by intent

    static constexpr ExtendedPrice infinity() { return ExtendedPrice(); }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }
    double value() const;
    std::optional<double> finite() const noexcept {
        return infinite_ ? std::nullopt : std::optional<double>(value_);
    }

    /// Orders finite prices by value; the marker compares greater than any finite price.
    bool operator<(double p) const noexcept { return !infinite_ && value_ < p; }
    bool operator>(double p) const noexcept { return infinite_ || value_ > p; }
    bool operator<=(double p) const noexcept { return !infinite_ && value_ <= p; }
    bool operator>=(double p) const noexcept { return infinite_ || value_ >= p; }
    friend bool operator==(const ExtendedPrice& a, const ExtendedPrice& b) noexcept {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    std::string to_string() const;

private:
    constexpr ExtendedPrice() : value_(0.0), infinite_(true) {}

    double value_;
    bool infinite_;
};

/// Replication interval [alpha, beta], 0 <= alpha <= beta <= infinity.
class PriceInterval {
public:
    PriceInterval(double alpha, ExtendedPrice beta);

    double alpha() const noexcept { return alpha_; }
    const ExtendedPrice& beta() const noexcept { return beta_; }

    bool contains(double p) const noexcept;
    /// Nearest point of the interval.
    double clamp(double p) const noexcept;

    friend bool operator==(const PriceInterval&, const PriceInterval&) = default;

private:
    double alpha_;
    ExtendedPrice beta_;
};

/// Renders a double with 17 significant digits (round-trip safe).
std::string format_number(double x);

}  // namespace cfmm
