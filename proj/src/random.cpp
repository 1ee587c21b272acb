#include "rawls/random.hpp"

namespace rawls {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kMasterSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kPathSalt = 0x8CB92BA72F3D8DD7ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

Seed Seed::child(std::uint64_t component) const {
  Seed out = *this;
  out.path_.push_back(component);
  return out;
}

std::uint64_t Seed::key() const {
  // Sequential chain: each step is a bijection of the component for a fixed
  // prefix, and prefixes are not interchangeable with components.
  std::uint64_t key = mix64(master_ ^ kMasterSalt);
  for (const std::uint64_t component : path_) {
    key = mix64(mix64(key ^ kPathSalt) + component);
  }
  return key;
}

Stream::result_type Stream::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

std::size_t Stream::below(std::size_t bound) {
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(*this);
}

}  // namespace rawls
