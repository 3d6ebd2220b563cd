#include <doctest.h>

#include <cmath>
#include <vector>

#include "accsev/rng.hpp"
#include "accsev/stats.hpp"
#include "oracles.hpp"

using namespace accsev;

// Reference tail values frozen from a 30-digit arbitrary-precision evaluation.
TEST_CASE("normal upper tail against reference values") {
    struct Row { double z, q; };
    const Row rows[] = {
        {0.5, 0.3085375387259869},  {1.0, 0.15865525393145705},
        {1.959964, 0.024999999096442402}, {3.0, 0.0013498980316300945},
        {5.0, 2.8665157187919391e-7}, {8.0, 6.2209605742717841e-16},
        {10.0, 7.6198530241605261e-24}, {-1.5, 0.93319279873114193},
    };
    for (const auto& row : rows)
        CHECK(std::abs(normal_upper_tail(row.z) - row.q) <= 1e-10);
}

TEST_CASE("chi-square upper tail against reference values, df up to 1e6") {
    struct Row { double x, df, q; };
    const Row rows[] = {
        {3.841459, 1, 0.049999994653195766}, {6.0, 2, 0.049787068367863943},
        {0.5, 1, 0.47950012218695346},       {10.0, 4, 0.040427681994512803},
        {100.0, 80, 0.064570368921132976},   {1e6, 1e6, 0.4998119368033945},
        {1.001e6, 1e6, 0.23967680482552136}, {999000.0, 1e6, 0.76017673145987281},
        {123.4, 100, 0.056250092435815899},
    };
    for (const auto& row : rows)
        CHECK(std::abs(chi_square_upper_tail(row.x, row.df) - row.q) <= 1e-8);
    CHECK(chi_square_upper_tail(-1.0, 3) == 1.0);
    CHECK_THROWS_AS(chi_square_upper_tail(1.0, 0.0), StatError);
}

TEST_CASE("student t upper tail against reference values") {
    struct Row { double t, df, q; };
    const Row rows[] = {
        {0.0, 1, 0.5},
        {1.224744871391589, 4, 0.14393206736334534},
        {2.0, 10, 0.036694017385370188},
        {1.959964, 1e6, 0.02500013774362652},
        {-2.5, 30, 0.99094217546596666},
        {3.779644730092272, 50, 0.0002097438589324932},
    };
    for (const auto& row : rows)
        CHECK(std::abs(student_t_upper_tail(row.t, row.df) - row.q) <= 1e-8);
}

TEST_CASE("normal quantile inverts the tail") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-10));
    for (double p : {0.01, 0.2, 0.63, 0.999}) {
        const double z = normal_quantile(p);
        CHECK(1.0 - normal_upper_tail(z) == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("wilcoxon exact: extreme arrangement") {
    const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    const auto result = wilcoxon_rank_sum(x, y);
    CHECK(result.statistic == doctest::Approx(6.0));
    CHECK(result.p_value == doctest::Approx(0.1).epsilon(1e-12));  // 2/20
    CHECK(result.method_detail == "exact enumeration");
}

TEST_CASE("wilcoxon with full ties is degenerate-symmetric") {
    const std::vector<double> x{1, 2}, y{1, 2};
    const auto result = wilcoxon_rank_sum(x, y);
    CHECK(result.statistic == doctest::Approx(5.0));  // midranks 1.5 + 3.5
    CHECK(result.p_value == doctest::Approx(1.0));
}

TEST_CASE("wilcoxon normal approximation: separated decades") {
    std::vector<double> x, y;
    for (int i = 1; i <= 10; ++i) x.push_back(i);
    for (int i = 11; i <= 20; ++i) y.push_back(i);
    const auto result = wilcoxon_rank_sum(x, y);
    CHECK(result.statistic == doctest::Approx(55.0));
    // z before correction = -50/sqrt(175) = -3.7796 -> p ~ 1.6e-4;
    // the continuity-corrected value is 1.8267e-4
    CHECK(result.p_value == doctest::Approx(1.8267179110955002e-4).epsilon(1e-9));
    CHECK(result.p_value > 1.4e-4);
    CHECK(result.p_value < 2.1e-4);
}

TEST_CASE("wilcoxon exact path matches bitmask enumeration oracle") {
    Rng rng(101);
    for (int it = 0; it < 60; ++it) {
        const size_t nx = 2 + rng.below(4), ny = 2 + rng.below(4);
        std::vector<double> x, y;
        std::vector<double> used;
        auto fresh = [&]() {
            for (;;) {
                const double v = std::floor(rng.next_unit() * 1000.0);
                if (std::find(used.begin(), used.end(), v) == used.end()) {
                    used.push_back(v);
                    return v;
                }
            }
        };
        for (size_t i = 0; i < nx; ++i) x.push_back(fresh());
        for (size_t i = 0; i < ny; ++i) y.push_back(fresh());
        const auto result = wilcoxon_rank_sum(x, y, WilcoxonMethod::exact);
        CHECK(result.p_value == doctest::Approx(oracles::wilcoxon_exact_two_sided(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("wilcoxon exact and approximate paths agree within 0.05") {
    Rng rng(202);
    for (int it = 0; it < 50; ++it) {
        const size_t nx = 3 + rng.below(4), ny = 3 + rng.below(3);
        std::vector<double> x, y, used;
        auto fresh = [&]() {
            for (;;) {
                const double v = rng.next_unit();
                if (std::find(used.begin(), used.end(), v) == used.end()) {
                    used.push_back(v);
                    return v;
                }
            }
        };
        for (size_t i = 0; i < nx; ++i) x.push_back(fresh());
        for (size_t i = 0; i < ny; ++i) y.push_back(fresh());
        const double p_exact = wilcoxon_rank_sum(x, y, WilcoxonMethod::exact).p_value;
        const double p_approx = wilcoxon_rank_sum(x, y, WilcoxonMethod::normal_approx).p_value;
        CHECK(std::abs(p_exact - p_approx) <= 0.05);
    }
}

TEST_CASE("wilcoxon is invariant under strictly increasing transforms") {
    Rng rng(303);
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) x.push_back(rng.next_unit() * 4.0);
    for (int i = 0; i < 25; ++i) y.push_back(rng.next_unit() * 4.0 + 0.5);
    const auto base = wilcoxon_rank_sum(x, y);
    auto transform = [](std::vector<double> v) {
        for (double& e : v) e = std::exp(3.0 * e) - 7.0;
        return v;
    };
    const auto mapped = wilcoxon_rank_sum(transform(x), transform(y));
    CHECK(base.statistic == doctest::Approx(mapped.statistic).epsilon(1e-12));
    CHECK(base.p_value == doctest::Approx(mapped.p_value).epsilon(1e-12));
}

TEST_CASE("wilcoxon null p-values are near-uniform") {
    Rng rng(404);
    std::vector<double> ps;
    ps.reserve(10000);
    for (int sim = 0; sim < 10000; ++sim) {
        std::vector<double> x(30), y(30);
        for (double& v : x) v = rng.next_unit();
        for (double& v : y) v = rng.next_unit();
        ps.push_back(wilcoxon_rank_sum(x, y).p_value);
    }
    CHECK(oracles::ks_distance_uniform(ps) < 0.05);
}

TEST_CASE("wilcoxon rejects empty input") {
    CHECK_THROWS_AS(wilcoxon_rank_sum(std::vector<double>{}, std::vector<double>{1.0}), StatError);
}

TEST_CASE("welch t on identical samples") {
    const std::vector<double> v{1, 2, 3};
    const auto result = welch_t_test(v, v);
    CHECK(result.statistic == doctest::Approx(0.0));
    CHECK(result.p_value == doctest::Approx(1.0));
}

TEST_CASE("welch t hand example") {
    const auto result = welch_t_test(std::vector<double>{1, 2, 3}, std::vector<double>{2, 3, 4});
    CHECK(result.statistic == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(*result.df == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(result.p_value == doctest::Approx(0.2878641347266908).epsilon(1e-9));
}

TEST_CASE("welch t degenerate variance errors") {
    CHECK_THROWS_AS(welch_t_test(std::vector<double>{0, 0}, std::vector<double>{0, 0}), StatError);
    CHECK_THROWS_AS(welch_t_test(std::vector<double>{1}, std::vector<double>{1, 2}), StatError);
}

TEST_CASE("jarque-bera on 1..100") {
    std::vector<double> x(100);
    for (int i = 0; i < 100; ++i) x[i] = i + 1;
    const auto result = normality_check(x);
    CHECK(result.statistic == doctest::Approx(6.00240048007201).epsilon(1e-9));
    CHECK(result.p_value == doctest::Approx(0.04972734778182201).epsilon(1e-9));
    CHECK(*result.df == 2.0);
}

TEST_CASE("jarque-bera affine invariance") {
    Rng rng(505);
    std::vector<double> x(200);
    for (double& v : x) v = rng.next_unit() * rng.next_unit();
    const double base = normality_check(x).statistic;
    for (double a : {0.5, 3.0, 1e4}) {
        std::vector<double> mapped(x);
        for (double& v : mapped) v = a * v - 11.25;
        CHECK(normality_check(mapped).statistic == doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("jarque-bera caps at a deterministic 5000-value subsample") {
    Rng rng(606);
    std::vector<double> x(20000);
    for (double& v : x) v = rng.next_unit();
    const auto first = normality_check(x);
    const auto second = normality_check(x);
    CHECK(first.statistic == second.statistic);
    CHECK(first.method_detail.find("5000") != std::string::npos);
}

TEST_CASE("jarque-bera preconditions") {
    CHECK_THROWS_AS(normality_check(std::vector<double>{1, 2, 3}), StatError);
    CHECK_THROWS_AS(normality_check(std::vector<double>(50, 7.0)), StatError);
}

TEST_CASE("chi-square balanced table scores zero") {
    const ContingencyTable table({{25, 25}, {25, 25}});
    const auto result = chi_square_test(table);
    CHECK(result.statistic == doctest::Approx(0.0));
    CHECK(result.p_value == doctest::Approx(1.0));
}

TEST_CASE("chi-square Yates hand examples") {
    const auto a = chi_square_test(ContingencyTable({{10, 20}, {20, 10}}));
    CHECK(a.statistic == doctest::Approx(5.4).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(0.02013675155034633).epsilon(1e-9));

    const auto b = chi_square_test(ContingencyTable({{10, 20}, {30, 40}}));
    CHECK(b.statistic == doctest::Approx(0.4464285714285714).epsilon(1e-12));
    CHECK(b.p_value == doctest::Approx(0.5040358664525046).epsilon(1e-9));
}

TEST_CASE("chi-square Yates equals the closed 2x2 formula") {
    Rng rng(707);
    for (int it = 0; it < 100; ++it) {
        const uint64_t a = 1 + rng.below(50), b = 1 + rng.below(50);
        const uint64_t c = 1 + rng.below(50), d = 1 + rng.below(50);
        const double n = static_cast<double>(a + b + c + d);
        const double diff = std::abs(static_cast<double>(a * d) - static_cast<double>(b * c));
        const double adj = std::max(0.0, diff - n / 2.0);
        const double expected = n * adj * adj /
                                (static_cast<double>(a + b) * static_cast<double>(c + d) *
                                 static_cast<double>(a + c) * static_cast<double>(b + d));
        const auto result = chi_square_test(ContingencyTable({{a, b}, {c, d}}));
        CHECK(result.statistic == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("chi-square statistic invariant under row and column permutation") {
    const ContingencyTable table({{3, 9, 14}, {21, 5, 8}});
    const ContingencyTable swapped_rows({{21, 5, 8}, {3, 9, 14}});
    const ContingencyTable swapped_cols({{14, 9, 3}, {8, 5, 21}});
    const double base = chi_square_test(table).statistic;
    CHECK(chi_square_test(swapped_rows).statistic == doctest::Approx(base).epsilon(1e-12));
    CHECK(chi_square_test(swapped_cols).statistic == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("chi-square rejects zero marginals") {
    CHECK_THROWS_AS(chi_square_test(ContingencyTable({{0, 0}, {5, 5}})), StatError);
    CHECK_THROWS_AS(chi_square_test(ContingencyTable({{0, 5}, {0, 5}})), StatError);
}

TEST_CASE("fisher exact hand examples") {
    CHECK(fisher_exact_2x2(ContingencyTable({{3, 1}, {1, 3}})).p_value ==
          doctest::Approx(0.4857142857142857).epsilon(1e-9));
    CHECK(fisher_exact_2x2(ContingencyTable({{2, 2}, {2, 2}})).p_value == doctest::Approx(1.0));
    CHECK(fisher_exact_2x2(ContingencyTable({{0, 5}, {5, 0}})).p_value ==
          doctest::Approx(2.0 / 252.0).epsilon(1e-9));
    CHECK_THROWS_AS(fisher_exact_2x2(ContingencyTable({{1, 2, 3}, {4, 5, 6}})), StatError);
}

TEST_CASE("fisher p invariant under transposition") {
    Rng rng(808);
    for (int it = 0; it < 50; ++it) {
        const uint64_t a = rng.below(8), b = rng.below(8), c = rng.below(8), d = rng.below(8);
        if ((a + b) == 0 || (c + d) == 0 || (a + c) == 0 || (b + d) == 0) continue;
        const double p1 = fisher_exact_2x2(ContingencyTable({{a, b}, {c, d}})).p_value;
        const double p2 = fisher_exact_2x2(ContingencyTable({{a, c}, {b, d}})).p_value;
        CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));
    }
}

TEST_CASE("binomial tail exact sums") {
    CHECK(binomial_tail_test(9, 10, 0.5).p_value == doctest::Approx(11.0 / 1024.0).epsilon(1e-12));
    CHECK(binomial_tail_test(5, 10, 0.5).p_value == doctest::Approx(638.0 / 1024.0).epsilon(1e-12));
    CHECK(binomial_tail_test(10, 10, 1.0).p_value == doctest::Approx(1.0));
    CHECK(binomial_tail_test(0, 10, 0.3).p_value == doctest::Approx(1.0));
    CHECK(binomial_tail_test(3, 10, 0.0).p_value == doctest::Approx(0.0));
    CHECK_THROWS_AS(binomial_tail_test(11, 10, 0.5), StatError);
    CHECK_THROWS_AS(binomial_tail_test(1, 10, 1.5), StatError);
}

TEST_CASE("clopper-pearson boundary closed forms and interior value") {
    const auto zero = clopper_pearson(0, 10, 0.95);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == doctest::Approx(1.0 - std::pow(0.025, 0.1)).epsilon(1e-9));
    CHECK(zero.upper == doctest::Approx(0.3084971078187608).epsilon(1e-9));

    const auto full = clopper_pearson(10, 10, 0.95);
    CHECK(full.lower == doctest::Approx(0.6915028921812392).epsilon(1e-9));
    CHECK(full.upper == 1.0);

    const auto mid = clopper_pearson(5, 10, 0.95);
    CHECK(mid.lower == doctest::Approx(0.18708602844739855).epsilon(1e-7));
    CHECK(mid.upper == doctest::Approx(0.8129139715526015).epsilon(1e-7));
}

TEST_CASE("every p-value stays in [0,1]") {
    Rng rng(909);
    for (int it = 0; it < 200; ++it) {
        std::vector<double> x(3 + rng.below(20)), y(3 + rng.below(20));
        for (double& v : x) v = std::floor(rng.next_unit() * 6.0);
        for (double& v : y) v = std::floor(rng.next_unit() * 6.0);
        const double p = wilcoxon_rank_sum(x, y).p_value;
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}
