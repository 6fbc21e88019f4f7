#pragma once

#include <gtest/gtest.h>

#include <string>

#include "schreier/schreier.hpp"

namespace testing_util {

using namespace schreier;

inline Ordinal O(const char* s) { return parse_ordinal(s); }
inline Rational Q(const char* s) { return parse_rational(s); }

inline std::shared_ptr<SchreierSystem> make_system(int horizon = 12) {
  SystemConfig c;
  c.horizon = horizon;
  return SchreierSystem::create(c);
}

// {i: coefficient} from a JSON-ish literal
inline SparseVector<Rational> V(std::initializer_list<std::pair<int, const char*>> xs) {
  SparseVector<Rational> v;
  for (auto [i, c] : xs) v[i] = parse_rational(c);
  return v;
}

inline std::vector<FinSet> sets(std::initializer_list<std::initializer_list<int>> xs) {
  std::vector<FinSet> out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

}  // namespace testing_util

#define EXPECT_ERROR_KIND(stmt, k)                      \
  do {                                                  \
    try {                                               \
      stmt;                                             \
      ADD_FAILURE() << "no exception from " #stmt;      \
    } catch (const schreier::Error& e) {                \
      EXPECT_EQ(e.kind(), schreier::ErrorKind::k) << e.what(); \
    }                                                   \
  } while (0)
