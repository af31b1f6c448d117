// Copyright 2026 The Halo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "halo/states.hpp"

namespace halo {
namespace {

Ket K(const std::string& s) {
  Ket k;
  for (char c : s) k.push_back(c - '0');
  return k;
}

double norm_of(const TargetSpec& t) {
  double n = 0;
  for (const auto& term : t.terms()) n += std::norm(term.amplitude);
  return n;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "nothing thrown";
  return ErrorCode::invalid_param;
}

TEST(Ghz, Examples) {
  auto g32 = ghz(3, 2).state();
  EXPECT_NEAR(g32.amplitude(K("000")).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g32.amplitude(K("111")).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(g32.size(), 2u);

  auto g43 = ghz(4, 3).state();
  EXPECT_EQ(g43.size(), 3u);
  for (auto k : {"0000", "1111", "2222"}) EXPECT_NEAR(g43.amplitude(K(k)).real(), 1 / std::sqrt(3.0), 1e-15);

  EXPECT_EQ(ghz(2, 2).state(), max_entangled(2).state());
}

TEST(Ghz, TermsAreOrthogonalAndNormalized) {
  for (int n = 2; n <= 8; ++n)
    for (int d = 2; d <= 6; ++d) {
      auto t = ghz(n, d);
      ASSERT_EQ(t.terms().size(), static_cast<std::size_t>(d));
      std::set<Ket> kets;
      for (const auto& term : t.terms()) kets.insert(term.ket);
      EXPECT_EQ(kets.size(), static_cast<std::size_t>(d));
      EXPECT_NEAR(norm_of(t), 1.0, 1e-14);
    }
}

TEST(Ghz, Errors) {
  EXPECT_EQ(code_of([] { ghz(1, 3); }), ErrorCode::invalid_param);
  EXPECT_EQ(code_of([] { ghz(4, 1); }), ErrorCode::invalid_param);
  EXPECT_EQ(code_of([] { ghz_with_ancillas(4, 3, -1); }), ErrorCode::invalid_param);
}

TEST(Ghz, WithAncillas) {
  auto t = ghz_with_ancillas(4, 4, 4);
  ASSERT_EQ(t.terms().size(), 4u);
  for (auto k : {"00000000", "11110000", "22220000", "33330000"})
    EXPECT_NEAR(t.state().amplitude(K(k)).real(), 0.5, 1e-15);
  EXPECT_EQ(t.dimensions(), (std::vector<int>{4, 4, 4, 4, 1, 1, 1, 1}));

  EXPECT_EQ(ghz_with_ancillas(4, 3, 0).state(), ghz(4, 3).state());

  auto s = ghz_with_ancillas(3, 2, 1).state();
  EXPECT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.amplitude(K("0000")).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amplitude(K("1110")).real(), 1 / std::sqrt(2.0), 1e-15);
}

// Reduced density matrix on `keep` for a real pure state over 3-level sites.
Eigen::MatrixXd marginal(const TargetSpec& t, const std::vector<int>& keep) {
  const int dim = static_cast<int>(std::pow(3, keep.size()));
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  auto index = [&](const Ket& k, const std::vector<int>& sites) {
    int i = 0;
    for (int s : sites) i = 3 * i + k[static_cast<std::size_t>(s)];
    return i;
  };
  std::vector<int> rest;
  for (int s = 0; s < 4; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) rest.push_back(s);
  for (const auto& a : t.terms())
    for (const auto& b : t.terms())
      if (index(a.ket, rest) == index(b.ket, rest))
        rho(index(a.ket, keep), index(b.ket, keep)) += (a.amplitude * std::conj(b.amplitude)).real();
  return rho;
}

TEST(Ame43, ClosedForm) {
  auto t = ame43();
  ASSERT_EQ(t.terms().size(), 9u);
  for (const auto& term : t.terms()) EXPECT_NEAR(term.amplitude.real(), 1.0 / 3.0, 1e-15);
}

TEST(Ame43, MarginalsAreMaximallyMixed) {
  auto t = ame43();
  for (int a = 0; a < 4; ++a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(marginal(t, {a}));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(es.eigenvalues()(i), 1.0 / 3.0, 1e-12);
    for (int b = a + 1; b < 4; ++b) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(marginal(t, {a, b}));
      for (int i = 0; i < 9; ++i) EXPECT_NEAR(es2.eigenvalues()(i), 1.0 / 9.0, 1e-12) << a << b;
    }
  }
}

TEST(ParseTarget, Examples) {
  auto bell = parse_target({"00", "11"}, std::vector<double>{1, 1});
  EXPECT_EQ(bell.state(), ghz(2, 2).state());
  auto minus = parse_target({"00", "11"}, std::vector<double>{1, -1});
  EXPECT_NEAR(minus.state().amplitude(K("11")).real(), -1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(minus.dimensions(), (std::vector<int>{2, 2}));
}

TEST(ParseTarget, Errors) {
  EXPECT_EQ(code_of([] { parse_target({"012"}, std::vector<double>{1}, {2, 2, 2}); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_target({"00", "00"}, std::vector<double>{1, 1}); }), ErrorCode::duplicate_ket);
  EXPECT_EQ(code_of([] { parse_target({"00", "1"}, std::vector<double>{1, 1}); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_target({"00"}, std::vector<double>{1, 1}); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_target({"0x"}, std::vector<double>{1}); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_target({"00"}, std::vector<double>{0}); }), ErrorCode::zero_state);
}

TEST(ParseTarget, AlwaysNormalized) {
  auto t = parse_target({"01", "10", "22"}, std::vector<Amplitude>{{3, 0}, {0, 4}, {-1, 2}});
  EXPECT_NEAR(norm_of(t), 1.0, 1e-15);
  EXPECT_NEAR(t.state().amplitude(K("10")).imag(), 4 / std::sqrt(30.0), 1e-15);
}

}  // namespace
}  // namespace halo
