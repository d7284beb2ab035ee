#pragma once

#include <gtest/gtest.h>

#include <functional>

#include "gaitlab.hpp"

namespace gaitlab::test {

inline ::testing::AssertionResult throws_kind(const std::function<void()>& fn, ErrorKind kind) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() == kind) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "wrong kind: " << e.what();
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "non-library exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "nothing thrown";
}

#define EXPECT_THROW_KIND(stmt, kind) EXPECT_TRUE(::gaitlab::test::throws_kind([&] { (void)(stmt); }, ::gaitlab::ErrorKind::kind))

inline RealGrid random_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RealGrid g(w, h);
  for (auto& v : g.values()) v = rng.uniform();
  return g;
}

inline BinaryMask filled_rect(int w, int h, int top, int left, int bottom, int right) {
  BinaryMask m(w, h);
  for (int r = top; r <= bottom; ++r)
    for (int c = left; c <= right; ++c) m(r, c) = 1;
  return m;
}

}  // namespace gaitlab::test
