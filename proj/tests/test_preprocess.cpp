#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "genecluster/error.hpp"
#include "genecluster/expr_matrix.hpp"
#include "genecluster/preprocess.hpp"

using namespace genecluster;

namespace {

ExpressionMatrix make_matrix(std::vector<std::vector<double>> rows) {
    ExpressionMatrix m;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    m.values = Matrix(rows.size(), cols);
    m.missing = MaskMatrix(rows.size(), cols, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m.gene_ids.push_back("g" + std::to_string(r + 1));
        for (std::size_t c = 0; c < cols; ++c) m.values(r, c) = rows[r][c];
    }
    for (std::size_t c = 0; c < cols; ++c) m.condition_ids.push_back("c" + std::to_string(c + 1));
    return m;
}

ExpressionMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               double lo = -10.0, double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ExpressionMatrix m;
    m.values = Matrix(rows, cols);
    m.missing = MaskMatrix(rows, cols, 0);
    for (std::size_t r = 0; r < rows; ++r) m.gene_ids.push_back("g" + std::to_string(r + 1));
    for (std::size_t c = 0; c < cols; ++c) m.condition_ids.push_back("c" + std::to_string(c + 1));
    for (auto& v : m.values.data()) v = dist(rng);
    return m;
}

}  // namespace

// ---------------------------------------------------------------- method I

TEST_CASE("zscore_normalize standardizes each row with the population sd") {
    const auto m = make_matrix({{1, 2, 3}});
    const NormalizedMatrix nm = zscore_normalize(m);
    // mean 2, population sd sqrt(2/3); z(1) = -1/sqrt(2/3) = -sqrt(1.5)
    const double expected = std::sqrt(1.5);
    CHECK(nm.values(0, 0) == doctest::Approx(-expected).epsilon(1e-12));
    CHECK(nm.values(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nm.values(0, 2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(nm.scheme == NormScheme::ZScore);
}

TEST_CASE("zscore_normalize maps constant rows to zeros") {
    const auto nm = zscore_normalize(make_matrix({{5, 5, 5}}));
    for (double v : nm.values.data()) CHECK(v == 0.0);
}

TEST_CASE("zscore_normalize is a fixpoint on standardized rows") {
    const auto once = zscore_normalize(make_matrix({{1.0, 2.0, 4.0, 8.0}}));
    ExpressionMatrix im;
    im.gene_ids = once.gene_ids;
    im.condition_ids = once.condition_ids;
    im.values = once.values;
    im.missing = MaskMatrix(1, 4, 0);
    const auto twice = zscore_normalize(im);
    for (std::size_t c = 0; c < 4; ++c)
        CHECK(twice.values(0, c) == doctest::Approx(once.values(0, c)).epsilon(1e-12));
}

TEST_CASE("zscore_normalize rejects single-condition matrices") {
    CHECK_THROWS_AS(zscore_normalize(make_matrix({{1.0}, {2.0}})), DataError);
}

TEST_CASE("discretize_method1 applies the sign and delta rules") {
    ExpressionMatrix m = make_matrix({{0.5, 0.2, 0.2, -0.1}});
    NormalizedMatrix nm;
    nm.gene_ids = m.gene_ids;
    nm.condition_ids = m.condition_ids;
    nm.values = m.values;
    nm.scheme = NormScheme::ZScore;

    const DiscretizedMatrix dm = discretize_method1(nm);
    CHECK(dm.codes(0, 0) == 1);   // sign of first value
    CHECK(dm.codes(0, 1) == -1);  // 0.5 > 0.2: down
    CHECK(dm.codes(0, 2) == 0);   // equal
    CHECK(dm.codes(0, 3) == -1);  // 0.2 > -0.1: down
    CHECK(dm.alphabet == std::vector<int>{-1, 0, 1});
}

TEST_CASE("discretize_method1 on an all-zero row gives all zeros") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1", "c2", "c3"};
    nm.values = Matrix(1, 3, 0.0);
    nm.scheme = NormScheme::ZScore;
    const auto dm = discretize_method1(nm);
    for (int c : dm.codes.data()) CHECK(c == 0);
}

TEST_CASE("discretize_method1 on a rising row starting negative") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1", "c2", "c3", "c4"};
    nm.values = Matrix(1, 4);
    const double vals[] = {-1.3, -0.4, 0.5, 1.2};
    for (std::size_t c = 0; c < 4; ++c) nm.values(0, c) = vals[c];
    nm.scheme = NormScheme::ZScore;
    const auto dm = discretize_method1(nm);
    CHECK(dm.codes(0, 0) == -1);
    CHECK(dm.codes(0, 1) == 1);
    CHECK(dm.codes(0, 2) == 1);
    CHECK(dm.codes(0, 3) == 1);
}

TEST_CASE("discretize_method1 requires z-score input") {
    NormalizedMatrix nm;
    nm.values = Matrix(1, 2, 0.0);
    nm.scheme = NormScheme::MinMax;
    CHECK_THROWS_AS(discretize_method1(nm), DataError);
}

// --------------------------------------------------------------- method II

TEST_CASE("minmax_normalize maps each row onto [new_min, new_max]") {
    const auto nm = minmax_normalize(make_matrix({{0, 5, 10}}));
    CHECK(nm.values(0, 0) == 0.0);
    CHECK(nm.values(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nm.values(0, 2) == 1.0);
}

TEST_CASE("minmax_normalize preserves rows already spanning the target range") {
    const auto nm = minmax_normalize(make_matrix({{0.0, 1.0}}));
    CHECK(nm.values(0, 0) == 0.0);
    CHECK(nm.values(0, 1) == 1.0);
}

TEST_CASE("minmax_normalize rejects constant rows naming the gene") {
    CHECK_THROWS_WITH_AS(minmax_normalize(make_matrix({{1, 2}, {3, 3}})),
                         doctest::Contains("g2"), DataError);
}

TEST_CASE("minmax_normalize validates the target range") {
    CHECK_THROWS_AS(minmax_normalize(make_matrix({{1, 2}}), 1.0, 0.0), DataError);
    CHECK_THROWS_AS(minmax_normalize(make_matrix({{1, 2}}), 0.5, 0.5), DataError);
}

TEST_CASE("discretize_method2 uses quartile bins with the last bin closed") {
    const auto nm = minmax_normalize(make_matrix({{0.0, 0.3, 0.6, 1.0}}));
    NormalizedMatrix direct = nm;  // values already exactly 0, 0.3, 0.6, 1
    const auto dm = discretize_method2(direct);
    CHECK(dm.codes(0, 0) == 1);
    CHECK(dm.codes(0, 1) == 2);
    CHECK(dm.codes(0, 2) == 3);
    CHECK(dm.codes(0, 3) == 4);
    CHECK(dm.alphabet == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("discretize_method2 boundary values fall into the upper bin") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1", "c2"};
    nm.values = Matrix(1, 2);
    nm.values(0, 0) = 0.25;
    nm.values(0, 1) = 0.75;
    nm.scheme = NormScheme::MinMax;
    const auto dm = discretize_method2(nm);
    CHECK(dm.codes(0, 0) == 2);
    CHECK(dm.codes(0, 1) == 4);
}

TEST_CASE("discretize_method2 maps all zeros to the lowest bin") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1", "c2"};
    nm.values = Matrix(1, 2, 0.0);
    nm.scheme = NormScheme::MinMax;
    const auto dm = discretize_method2(nm);
    CHECK(dm.codes(0, 0) == 1);
    CHECK(dm.codes(0, 1) == 1);
}

TEST_CASE("discretize_method2 rejects out-of-range values and wrong schemes") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1"};
    nm.values = Matrix(1, 1, 1.5);
    nm.scheme = NormScheme::MinMax;
    CHECK_THROWS_AS(discretize_method2(nm), DataError);

    nm.values(0, 0) = 0.5;
    nm.scheme = NormScheme::ZScore;
    CHECK_THROWS_AS(discretize_method2(nm), DataError);

    nm.scheme = NormScheme::MinMax;
    nm.range_max = 2.0;  // not the [0,1] variant
    CHECK_THROWS_AS(discretize_method2(nm), DataError);
}

// -------------------------------------------------------------- method III

TEST_CASE("column_mean_normalize divides each column by its mean") {
    const auto nm = column_mean_normalize(make_matrix({{1}, {2}, {3}}));
    CHECK(nm.values(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nm.values(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nm.values(2, 0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("column_mean_normalize leaves an all-ones column unchanged") {
    const auto nm = column_mean_normalize(make_matrix({{1, 1}, {1, 1}}));
    for (double v : nm.values.data()) CHECK(v == 1.0);
}

TEST_CASE("column_mean_normalize rejects zero-mean columns naming the condition") {
    CHECK_THROWS_WITH_AS(column_mean_normalize(make_matrix({{1, 1}, {-1, 1}})),
                         doctest::Contains("c1"), DataError);
}

TEST_CASE("discretize_method3 uses equal-width bins over the whole matrix") {
    // values spanning [0, 10] with k=5: width 2
    const auto m = make_matrix({{0.0, 3.5, 4.0}, {7.9, 10.0, 1.0}});
    NormalizedMatrix nm;
    nm.gene_ids = m.gene_ids;
    nm.condition_ids = m.condition_ids;
    nm.values = m.values;
    nm.scheme = NormScheme::ColumnMean;
    const auto dm = discretize_method3(nm, 5);
    CHECK(dm.codes(0, 0) == 1);  // 0 -> first bin
    CHECK(dm.codes(0, 1) == 2);  // 3.5 in [2,4)
    CHECK(dm.codes(0, 2) == 3);  // boundary 4 -> right-open, bin 3
    CHECK(dm.codes(1, 0) == 4);  // 7.9 in [6,8)
    CHECK(dm.codes(1, 1) == 5);  // max closes the last bin
    CHECK(dm.codes(1, 2) == 1);
    CHECK(dm.alphabet == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("discretize_method3 with one bin codes everything 1") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1", "c2"};
    nm.values = Matrix(1, 2);
    nm.values(0, 0) = -3.0;
    nm.values(0, 1) = 9.0;
    nm.scheme = NormScheme::ColumnMean;
    const auto dm = discretize_method3(nm, 1);
    CHECK(dm.codes(0, 0) == 1);
    CHECK(dm.codes(0, 1) == 1);
}

TEST_CASE("discretize_method3 rejects k=0 and constant matrices with k>1") {
    NormalizedMatrix nm;
    nm.gene_ids = {"g1"};
    nm.condition_ids = {"c1", "c2"};
    nm.values = Matrix(1, 2, 4.0);
    nm.scheme = NormScheme::ColumnMean;
    CHECK_THROWS_AS(discretize_method3(nm, 0), DataError);
    CHECK_THROWS_AS(discretize_method3(nm, 4), DataError);
    CHECK_NOTHROW(discretize_method3(nm, 1));
}

TEST_CASE("discretize_method3 per-column mode bins each condition separately") {
    const auto m = make_matrix({{0.0, 100.0}, {10.0, 200.0}});
    NormalizedMatrix nm;
    nm.gene_ids = m.gene_ids;
    nm.condition_ids = m.condition_ids;
    nm.values = m.values;
    nm.scheme = NormScheme::ColumnMean;
    const auto dm = discretize_method3(nm, 2, true);
    CHECK(dm.codes(0, 0) == 1);
    CHECK(dm.codes(1, 0) == 2);
    CHECK(dm.codes(0, 1) == 1);
    CHECK(dm.codes(1, 1) == 2);
}

// -------------------------------------------------------------- method IV

TEST_CASE("row_unit_normalize scales rows to unit length") {
    const auto nm = row_unit_normalize(make_matrix({{3, 4}}));
    CHECK(nm.values(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(nm.values(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("row_unit_normalize leaves unit rows unchanged") {
    const auto nm = row_unit_normalize(make_matrix({{1, 0, 0}}));
    CHECK(nm.values(0, 0) == 1.0);
    CHECK(nm.values(0, 1) == 0.0);
    CHECK(nm.values(0, 2) == 0.0);
}

TEST_CASE("row_unit_normalize rejects zero rows naming the gene") {
    CHECK_THROWS_WITH_AS(row_unit_normalize(make_matrix({{1, 2}, {0, 0}})),
                         doctest::Contains("g2"), DataError);
}

TEST_CASE("discretize_method4 takes signs") {
    const auto m = make_matrix({{0.6, -0.8, 0.0}});
    NormalizedMatrix nm;
    nm.gene_ids = m.gene_ids;
    nm.condition_ids = m.condition_ids;
    nm.values = m.values;
    nm.scheme = NormScheme::RowUnit;
    const auto dm = discretize_method4(nm);
    CHECK(dm.codes(0, 0) == 1);
    CHECK(dm.codes(0, 1) == -1);
    CHECK(dm.codes(0, 2) == 0);
}

TEST_CASE("discretize_method4 on an all-positive row codes all ones") {
    const auto dm = discretize_method4(row_unit_normalize(make_matrix({{1, 2, 3}})));
    for (int c : dm.codes.data()) CHECK(c == 1);
}

// ----------------------------------------------------------- pattern string

TEST_CASE("pattern_string joins codes with commas, signs included") {
    const auto m = make_matrix({{5.0, 1.0, 1.0}});
    const auto dm = discretize_method1(zscore_normalize(m));
    // z-row: positive, drop, equal -> 1,-1,0
    CHECK(pattern_string(dm, "g1") == "1,-1,0");
}

TEST_CASE("pattern_string handles a single condition and method II codes") {
    NormalizedMatrix nm;
    nm.gene_ids = {"solo"};
    nm.condition_ids = {"c1"};
    nm.values = Matrix(1, 1, 0.9);
    nm.scheme = NormScheme::MinMax;
    auto dm = discretize_method2(nm);
    CHECK(pattern_string(dm, "solo") == "4");

    const auto m = make_matrix({{0.0, 0.3, 0.6, 1.0}});
    const auto dm2 = discretize_method2(minmax_normalize(m));
    CHECK(pattern_string(dm2, "g1") == "1,2,3,4");
}

TEST_CASE("pattern_string rejects unknown genes") {
    const auto dm = discretize_method1(zscore_normalize(make_matrix({{1, 2}})));
    CHECK_THROWS_AS(pattern_string(dm, "nope"), DataError);
}

// ------------------------------------------------------------- properties

TEST_CASE("every method stays inside its declared alphabet on random input") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 2 + rng() % 12;
        const std::size_t cols = 2 + rng() % 10;
        const auto m = random_matrix(rng, rows, cols);
        for (const Method method : {Method::I, Method::II, Method::III, Method::IV}) {
            DiscretizedMatrix dm;
            try {
                dm = apply_method(m, method, 4);
            } catch (const DataError&) {
                continue;  // degenerate row/column; rejection is the contract
            }
            CHECK(dm.codes.rows() == rows);
            CHECK(dm.codes.cols() == cols);
            CHECK(dm.gene_ids == m.gene_ids);
            for (int code : dm.codes.data()) {
                const bool in_alphabet =
                    std::find(dm.alphabet.begin(), dm.alphabet.end(), code) != dm.alphabet.end();
                CHECK(in_alphabet);
            }
        }
    }
}

TEST_CASE("zscore rows end up with mean 0 and population sd 1") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_matrix(rng, 5, 8);
        const auto nm = zscore_normalize(m);
        for (std::size_t r = 0; r < nm.values.rows(); ++r) {
            double mean = 0;
            for (double v : nm.values.row(r)) mean += v;
            mean /= 8.0;
            double var = 0;
            for (double v : nm.values.row(r)) var += (v - mean) * (v - mean);
            var /= 8.0;
            CHECK(std::abs(mean) < 1e-9);
            CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("minmax rows hit both endpoints") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_matrix(rng, 6, 7);
        const auto nm = minmax_normalize(m, -2.0, 3.0);
        for (std::size_t r = 0; r < nm.values.rows(); ++r) {
            const auto row = nm.values.row(r);
            const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
            CHECK(std::abs(*lo - (-2.0)) < 1e-12);
            CHECK(std::abs(*hi - 3.0) < 1e-12);
        }
    }
}

TEST_CASE("column_mean columns end up with mean 1") {
    std::mt19937_64 rng(13);
    const auto m = random_matrix(rng, 9, 5, 0.5, 20.0);
    const auto nm = column_mean_normalize(m);
    for (std::size_t c = 0; c < 5; ++c) {
        double mean = 0;
        for (std::size_t r = 0; r < 9; ++r) mean += nm.values(r, c);
        mean /= 9.0;
        CHECK(std::abs(mean - 1.0) < 1e-12);
    }
}

TEST_CASE("row_unit rows end up with norm 1") {
    std::mt19937_64 rng(14);
    const auto m = random_matrix(rng, 7, 6);
    const auto nm = row_unit_normalize(m);
    for (std::size_t r = 0; r < 7; ++r) {
        double sq = 0;
        for (double v : nm.values.row(r)) sq += v * v;
        CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-12);
    }
}

TEST_CASE("method I delta codes ignore constant shifts of a gene row") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_matrix(rng, 4, 9);
        const auto before = discretize_method1(zscore_normalize(m));
        for (std::size_t c = 0; c < 9; ++c) m.values(2, c) += 7.5;  // shift one gene
        const auto after = discretize_method1(zscore_normalize(m));
        // delta codes (columns 2..T) are shift-invariant; the first column is not
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 1; c < 9; ++c) CHECK(before.codes(r, c) == after.codes(r, c));
    }
}

TEST_CASE("method IV codes ignore positive rescaling of a gene row") {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_matrix(rng, 4, 6);
        const auto before = discretize_method4(row_unit_normalize(m));
        for (std::size_t c = 0; c < 6; ++c) m.values(1, c) *= 0.001 + (rng() % 1000);
        const auto after = discretize_method4(row_unit_normalize(m));
        CHECK(before.codes == after.codes);
    }
}

TEST_CASE("methods II and III are monotone in the value") {
    std::mt19937_64 rng(17);
    SUBCASE("method II within a row") {
        const auto m = random_matrix(rng, 3, 10);
        const auto nm = minmax_normalize(m);
        const auto dm = discretize_method2(nm);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t a = 0; a < 10; ++a)
                for (std::size_t b = 0; b < 10; ++b)
                    if (nm.values(r, a) < nm.values(r, b))
                        CHECK(dm.codes(r, a) <= dm.codes(r, b));
    }
    SUBCASE("method III across the whole matrix") {
        const auto m = random_matrix(rng, 4, 6);
        NormalizedMatrix nm;
        nm.gene_ids = m.gene_ids;
        nm.condition_ids = m.condition_ids;
        nm.values = m.values;
        nm.scheme = NormScheme::ColumnMean;
        const auto dm = discretize_method3(nm, 6);
        const auto& vals = nm.values.data();
        const auto& codes = dm.codes.data();
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = 0; b < vals.size(); ++b)
                if (vals[a] < vals[b]) CHECK(codes[a] <= codes[b]);
    }
}

TEST_CASE("normalizers refuse matrices that still have missing cells") {
    auto m = make_matrix({{1, 2}, {3, 4}});
    m.missing(0, 1) = 1;
    CHECK_THROWS_AS(zscore_normalize(m), DataError);
    CHECK_THROWS_AS(minmax_normalize(m), DataError);
    CHECK_THROWS_AS(column_mean_normalize(m), DataError);
    CHECK_THROWS_AS(row_unit_normalize(m), DataError);
}
