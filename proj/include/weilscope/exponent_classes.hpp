#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "weilscope/gf_core.hpp"

namespace weilscope {

// Class of s under s ~ p^j s (mod q-1), widened by s -> 1/s.
struct ExponentClass {
  std::uint64_t canonical = 0;
  std::vector<std::uint64_t> coset;          // sorted
  std::vector<std::uint64_t> inverse_coset;  // sorted
  std::vector<std::uint64_t> members;        // sorted union
  bool trivial = false;                      // contains 1
  bool kloosterman = false;                  // contains q-2
  std::uint64_t congruence = 0;              // s mod (p-1); 0 when p = 2

  bool operator==(const ExponentClass&) const = default;
};

bool is_invertible(std::uint64_t q, std::uint64_t s) noexcept;
ExponentClass approx_class(std::uint64_t q, std::uint32_t p, std::uint64_t s);
// Every invertible s in [1, q-2] lands in exactly one class; ordered by
// canonical representative, so the trivial class comes first.
std::vector<ExponentClass> enumerate_classes(std::uint64_t q, std::uint32_t p);
std::vector<ExponentClass> enumerate_classes(const FiniteField& field);

nlohmann::json to_json(const ExponentClass& c);

}  // namespace weilscope
