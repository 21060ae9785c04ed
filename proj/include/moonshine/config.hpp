#pragma once

#include <atomic>
#include <cstdint>

namespace moonshine {

// Process-wide ceiling on cyclotomic field moduli.  Substitutions and zeta
// constructions refuse to build Q(zeta_M) for M beyond this cap, so runaway
// composite substitutions fail fast instead of exploding.
inline std::atomic<std::int64_t>& modulus_cap_ref() {
  static std::atomic<std::int64_t> cap{360};
  return cap;
}

inline std::int64_t modulus_cap() { return modulus_cap_ref().load(); }
inline void set_modulus_cap(std::int64_t cap) { modulus_cap_ref().store(cap); }

}  // namespace moonshine
