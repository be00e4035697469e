#include <cmath>
#include <set>

#include <doctest.h>

#include "gibbsvs/rng.hpp"

using namespace gibbsvs;

TEST_CASE("Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same coordinates, same numbers") {
  Rng a(42, 7, 3), b(42, 7, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
}

TEST_CASE("streams and substreams separate") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 50; ++s)
    for (std::uint32_t sub = 0; sub < 20; ++sub) firsts.insert(Rng(1, s, sub).bits());
  CHECK(firsts.size() == 1000);
  CHECK(Rng(1, 0).bits() != Rng(2, 0).bits());
}

TEST_CASE("stream ids are distinct across tags, iterations and chains") {
  std::set<std::uint64_t> ids;
  for (std::uint32_t c = 0; c < 4; ++c)
    for (std::uint64_t t = 0; t < 100; ++t)
      for (auto tag : {StreamTag::init, StreamTag::latent, StreamTag::sign, StreamTag::indicator,
                       StreamTag::coefficients, StreamTag::scan_order, StreamTag::metropolis})
        ids.insert(stream_id(c, t, tag));
  CHECK(ids.size() == 4 * 100 * 7);
}

TEST_CASE("variates have the right moments") {
  Rng r(9, 1);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  std::uint64_t hits = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
    const auto k = r.below(7);
    REQUIRE(k < 7);
    hits += k == 3;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(static_cast<double>(hits) / n == doctest::Approx(1.0 / 7.0).epsilon(0.03));
}
