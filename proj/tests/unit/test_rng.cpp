#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "fbmsde/rng.hpp"

using namespace fbmsde;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using W = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    std::vector<double> va(100), vb(100), vc(100), vd(100);
    a.fill_normal(va);
    b.fill_normal(vb);
    c.fill_normal(vc);
    d.fill_normal(vd);
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
}

TEST_CASE("uniforms lie in the open unit interval") {
    RngStream rng(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("normal moments") {
    RngStream rng(2024, 9);
    const int n = 400000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
        s4 += z * z * z * z;
    }
    s1 /= n;
    s2 /= n;
    s3 /= n;
    s4 /= n;
    // Five standard errors for each sample moment.
    CHECK(std::abs(s1) < 5 * std::sqrt(1.0 / n));
    CHECK(std::abs(s2 - 1) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(s3) < 5 * std::sqrt(15.0 / n));
    CHECK(std::abs(s4 - 3) < 5 * std::sqrt(96.0 / n));
}

TEST_CASE("fill_normal matches repeated normal()") {
    RngStream a(5, 5), b(5, 5);
    std::vector<double> v(33);
    a.fill_normal(v);
    for (double x : v) CHECK(x == b.normal());
}

TEST_CASE("u64 draws do not repeat across a short run") {
    RngStream rng(11, 0);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 10000; ++i) seen.insert(rng.next_u64());
    CHECK(seen.size() == 10000);
}
