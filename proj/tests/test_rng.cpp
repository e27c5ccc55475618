#include "doctest.h"

#include <algorithm>
#include <set>

#include "jsscl/rng.hpp"

using namespace jsscl;

TEST_CASE("derive_seed separates streams and is stable") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(42, s));
    CHECK(seen.size() == 1000);
}

TEST_CASE("uniform_int covers the range and respects bounds") {
    Rng rng(7);
    std::set<int> seen;
    for (int i = 0; i < 2000; ++i) {
        int v = rng.uniform_int(3, 9);
        CHECK(v >= 3);
        CHECK(v <= 9);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.uniform_int(5, 5) == 5);
    CHECK_THROWS_AS(rng.uniform_int(5, 4), ValidationError);
}

TEST_CASE("uniform01 stays in [0, 1)") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal draws have roughly the configured moments") {
    Rng rng(3);
    double sum = 0.0, sq = 0.0;
    int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(10.0, 2.0);
        sum += x;
        sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(10.0).epsilon(0.01));
    CHECK(var == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("shuffle permutes deterministically per seed") {
    std::vector<int> a(20), b(20);
    for (int i = 0; i < 20; ++i) a[i] = b[i] = i;
    Rng r1(99), r2(99);
    r1.shuffle(a);
    r2.shuffle(b);
    CHECK(a == b);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("engine state round-trips through text") {
    Rng rng(5);
    rng.next_u64();
    rng.uniform01();
    std::string state = rng.save_state();
    Rng other(0);
    other.load_state(state);
    for (int i = 0; i < 16; ++i) CHECK(rng.next_u64() == other.next_u64());
    CHECK_THROWS_AS(other.load_state("not a state"), ValidationError);
}
