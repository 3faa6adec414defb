#pragma once

#include <cstdint>
#include <random>

namespace ordstat {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a (stream, block) cell. Results are independent of the order
/// in which cells are drawn, which keeps parallel schedules bit-stable.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t block = 0);

/// Standard normal quantile, rational approximation polished with one
/// Halley step against erfc. Absolute error is far below 1e-9.
double normal_quantile(double p);

/// Deterministic variate source. mt19937_64 is fully specified by the
/// standard, so streams are identical across platforms; all variates are
/// produced from uniforms by inversion or rejection, never through
/// implementation-defined std:: distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_quantile(uniform()); }

    double exponential(double scale) { return -scale * std::log(uniform()); }

    /// Gamma(shape, 1) via Marsaglia-Tsang squeeze; shapes below one use
    /// the boosting identity G(a) = G(a+1) U^{1/a}.
    double gamma(double shape);

    /// Density a z^{a-1} on (0,1), by inversion.
    double power(double shape);

private:
    std::mt19937_64 gen_;
};

} // namespace ordstat
