#pragma once

#include <cstdint>

namespace devo {

/// Counter-based random stream keyed by a 64-bit identity.
///
/// Each draw is a strong mix of (key, counter), so a stream is a pure
/// function of its key: any stream can be rebuilt from the key alone and
/// replays the same sequence regardless of process, thread count or how far
/// other streams have advanced. Sub-streams derive a fresh key from
/// (parent key, id) and start at counter zero, which makes per-(generation,
/// individual, replicate) streams reproducible under any evaluation order.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed)
        : key_(mix64(master_seed ^ 0x6a09e667f3bcc909ull)) {}

    /// Derived stream with its own key. Depends only on (key, id), never on
    /// how far this stream has advanced.
    [[nodiscard]] RngStream child(std::uint64_t id) const {
        return RngStream(from_key{}, mix64(key_ ^ mix64(id + 0xbb67ae8584caa73bull)));
    }

    /// Stream identity; equal keys replay equal sequences.
    [[nodiscard]] std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ull;
        return mix64(key_ + counter_);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi); returns lo exactly when the interval is empty.
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform on {0, ..., n-1} without modulo bias (Lemire rejection).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    struct from_key {};
    RngStream(from_key, std::uint64_t key) : key_(key) {}

    // SplitMix64 finalizer.
    static std::uint64_t mix64(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Derivation ids for the well-known stream families used across a run.
// Keeping them in one place guarantees distinct purposes can never collide.
namespace stream {
inline constexpr std::uint64_t kInit = 1;      // initial population sampling
inline constexpr std::uint64_t kOps = 2;       // optimizer operator draws
inline constexpr std::uint64_t kEval = 3;      // per-evaluation replicate seeds
inline constexpr std::uint64_t kRun = 4;       // comparison-run substreams
inline constexpr std::uint64_t kCells = 5;     // simulator: cancer-cell draws
inline constexpr std::uint64_t kWorkers = 6;   // simulator: worker/cargo draws
inline constexpr std::uint64_t kRetry = 7;     // evaluator retry reseeding
}  // namespace stream

}  // namespace devo
