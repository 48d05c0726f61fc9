#include "gad/numeric/rng.hpp"

#include <cmath>
#include <numbers>

namespace gad {

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
    // FNV-1a over the tag, then mixed with base and index.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(mix64(base ^ h) + index);
}

double counter_uniform(std::uint64_t key, std::uint64_t counter) {
    return double(mix64(mix64(key) ^ mix64(counter + 0x632be59bd9b4e019ULL)) >> 11) * 0x1.0p-53;
}

double counter_normal(std::uint64_t key, std::uint64_t counter) {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - counter_uniform(key, 2 * counter);
    const double u2 = counter_uniform(key, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t n) {
    // Reject the 2^64 mod n lowest draws so every residue is equally likely.
    const std::uint64_t range = n;
    const std::uint64_t threshold = (0 - range) % range;
    std::uint64_t r = engine_();
    while (r < threshold) r = engine_();
    return std::size_t(r % range);
}

}  // namespace gad
