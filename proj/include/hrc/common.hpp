#ifndef HRC_COMMON_HPP
#define HRC_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <string>

namespace hrc {

inline constexpr const char* kVersion = "0.1.0";

// State, noise and control vectors are tiny (at most a few coordinates), so
// bounded-dynamic Eigen types keep everything on the stack in the hot loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

enum class Player { Leader, Follower };

inline const char* player_name(Player p) {
    return p == Player::Leader ? "leader" : "follower";
}

// Fixed 17-significant-digit formatting used by every CSV writer, so that
// identical runs emit byte-identical artifacts.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// FNV-1a 64-bit, used for output digests in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace hrc

#endif  // HRC_COMMON_HPP
