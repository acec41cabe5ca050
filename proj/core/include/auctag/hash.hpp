#ifndef AUCTAG_HASH_HPP_
#define AUCTAG_HASH_HPP_

#include <cstdint>
#include <string_view>

namespace auctag {

// Name recorded in run metadata next to the hash seed.
inline constexpr std::string_view kFeatureHashName = "xxh64";

// XXH64 of `data` with `seed`; output matches the reference implementation
// bit for bit on every platform.
std::uint64_t xxh64(std::string_view data, std::uint64_t seed);

}  // namespace auctag

#endif  // AUCTAG_HASH_HPP_
