#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "genecluster/error.hpp"
#include "genecluster/expr_matrix.hpp"
#include "test_util.hpp"

using namespace genecluster;
using testutil::TempDir;

TEST_CASE("load_matrix parses a plain CSV with header") {
    TempDir dir;
    const auto p = dir.write("m.csv", "id,c1,c2\ng1,1.0,2.0\ng2,3.0,4.0\ng3,5.0,6.0\n");
    const ExpressionMatrix m = load_matrix(p);
    CHECK(m.n_genes() == 3);
    CHECK(m.n_conditions() == 2);
    CHECK(m.gene_ids == std::vector<std::string>{"g1", "g2", "g3"});
    CHECK(m.condition_ids == std::vector<std::string>{"c1", "c2"});
    CHECK(m.values(0, 0) == 1.0);
    CHECK(m.values(2, 1) == 6.0);
    CHECK_FALSE(m.has_missing());
}

TEST_CASE("load_matrix marks empty and sentinel cells as missing") {
    TempDir dir;
    const auto p = dir.write("m.csv", "id,c1,c2\ng1,1.0,2.0\ng2,,4.0\ng3,NA,6.0\n");
    const ExpressionMatrix m = load_matrix(p);
    CHECK(m.missing(1, 0) == 1);
    CHECK(m.missing(2, 0) == 1);
    CHECK(m.missing(0, 0) == 0);
    CHECK(m.values(1, 1) == 4.0);
}

TEST_CASE("load_matrix rejects duplicate gene ids") {
    TempDir dir;
    const auto p = dir.write("m.csv", "id,c1\ng1,1.0\ng1,2.0\n");
    CHECK_THROWS_WITH_AS(load_matrix(p), doctest::Contains("duplicate gene id 'g1'"), DataError);
}

TEST_CASE("load_matrix names the offending line and cell") {
    TempDir dir;
    SUBCASE("wrong column count") {
        const auto p = dir.write("m.csv", "id,c1,c2\ng1,1.0,2.0\ng2,3.0\n");
        CHECK_THROWS_WITH_AS(load_matrix(p), doctest::Contains(":3:"), DataError);
    }
    SUBCASE("non-numeric cell") {
        const auto p = dir.write("m.csv", "id,c1,c2\ng1,1.0,oops\n");
        try {
            load_matrix(p);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("oops") != std::string::npos);
            CHECK(msg.find("g1") != std::string::npos);
            CHECK(msg.find("c2") != std::string::npos);
        }
    }
    SUBCASE("infinities do not survive ingestion") {
        const auto p = dir.write("m.csv", "id,c1,c2\ng1,1.0,inf\n");
        CHECK_THROWS_AS(load_matrix(p), DataError);
        const auto q = dir.write("m2.csv", "id,c1,c2\ng1,nan,2.0\n");
        CHECK_THROWS_AS(load_matrix(q), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_matrix(dir.file("absent.csv")), DataError);
    }
}

TEST_CASE("load_matrix honors delimiter and no-header options") {
    TempDir dir;
    CsvOptions opts;
    opts.delimiter = '\t';
    opts.header = false;
    const auto p = dir.write("m.tsv", "g1\t1.0\t2.0\ng2\t3.0\t4.0\n");
    const ExpressionMatrix m = load_matrix(p, opts);
    CHECK(m.n_genes() == 2);
    CHECK(m.condition_ids == std::vector<std::string>{"c1", "c2"});
}

TEST_CASE("save/load round-trips labels, values and masks exactly") {
    TempDir dir;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    ExpressionMatrix m;
    m.gene_ids = {"alpha", "beta", "gamma", "delta"};
    m.condition_ids = {"t1", "t2", "t3"};
    m.values = Matrix(4, 3);
    m.missing = MaskMatrix(4, 3, 0);
    for (auto& v : m.values.data()) v = dist(rng) * std::pow(10.0, int(rng() % 13) - 6);
    m.missing(2, 1) = 1;
    m.values(2, 1) = 0.0;

    const auto p = dir.file("round.csv");
    save_matrix(m, p);
    const ExpressionMatrix back = load_matrix(p);
    CHECK(back.gene_ids == m.gene_ids);
    CHECK(back.condition_ids == m.condition_ids);
    CHECK(back.missing == m.missing);
    CHECK(back.values == m.values);  // bit-equal, not approximate
}

TEST_CASE("drop_incomplete_genes keeps complete rows in order") {
    ExpressionMatrix m;
    m.gene_ids = {"g1", "g2", "g3"};
    m.condition_ids = {"c1", "c2"};
    m.values = Matrix(3, 2, 1.0);
    m.missing = MaskMatrix(3, 2, 0);
    m.missing(1, 1) = 1;

    const auto [kept, summary] = drop_incomplete_genes(m);
    CHECK(kept.gene_ids == std::vector<std::string>{"g1", "g3"});
    CHECK(summary.n_genes_raw == 3);
    CHECK(summary.n_genes_kept == 2);
    CHECK(summary.n_missing_cells == 1);

    SUBCASE("idempotent") {
        const auto [again, s2] = drop_incomplete_genes(kept);
        CHECK(again.gene_ids == kept.gene_ids);
        CHECK(again.values == kept.values);
        CHECK(s2.n_genes_kept == s2.n_genes_raw);
    }
}

TEST_CASE("drop_incomplete_genes is the identity on complete matrices") {
    ExpressionMatrix m;
    m.gene_ids = {"g1", "g2"};
    m.condition_ids = {"c1"};
    m.values = Matrix(2, 1, 3.5);
    m.missing = MaskMatrix(2, 1, 0);
    const auto [kept, summary] = drop_incomplete_genes(m);
    CHECK(kept.values == m.values);
    CHECK(summary.n_genes_kept == summary.n_genes_raw);
}

TEST_CASE("drop_incomplete_genes rejects an all-incomplete matrix") {
    ExpressionMatrix m;
    m.gene_ids = {"g1", "g2", "g3"};
    m.condition_ids = {"c1", "c2"};
    m.values = Matrix(3, 2, 1.0);
    m.missing = MaskMatrix(3, 2, 0);
    for (std::size_t r = 0; r < 3; ++r) m.missing(r, r % 2) = 1;
    CHECK_THROWS_AS(drop_incomplete_genes(m), DataError);
}

TEST_CASE("a 2884-gene matrix with 2 incomplete genes reduces to 2882 rows") {
    BlobData blob = synthesize_blobs(2884, 17, 12, 0.5, 99);
    blob.matrix.missing(100, 5) = 1;
    blob.matrix.missing(2000, 16) = 1;
    const auto [kept, summary] = drop_incomplete_genes(blob.matrix);
    CHECK(kept.n_genes() == 2882);
    CHECK(kept.n_conditions() == 17);
    CHECK(summary.n_genes_raw == 2884);
}

TEST_CASE("synthesize_blobs shape, labels and determinism") {
    const BlobData a = synthesize_blobs(300, 17, 12, 0.5, 42);
    CHECK(a.matrix.n_genes() == 300);
    CHECK(a.matrix.n_conditions() == 17);
    CHECK(a.true_labels.size() == 300);
    std::vector<char> seen(12, 0);
    for (std::size_t label : a.true_labels) {
        REQUIRE(label < 12);
        seen[label] = 1;
    }
    CHECK(std::count(seen.begin(), seen.end(), 1) == 12);

    const BlobData b = synthesize_blobs(300, 17, 12, 0.5, 42);
    CHECK(a.matrix.values == b.matrix.values);  // bit-identical
    CHECK(a.true_labels == b.true_labels);

    const BlobData c = synthesize_blobs(300, 17, 12, 0.5, 43);
    CHECK(a.matrix.values != c.matrix.values);
}

TEST_CASE("synthesize_blobs with k_true == n_genes gives every gene its own label") {
    const BlobData blob = synthesize_blobs(5, 3, 5, 0.1, 7);
    std::vector<std::size_t> expected{0, 1, 2, 3, 4};
    CHECK(blob.true_labels == expected);
}

TEST_CASE("synthesize_blobs validates parameters") {
    CHECK_THROWS_AS(synthesize_blobs(5, 3, 6, 0.1, 1), DataError);   // k_true > n
    CHECK_THROWS_AS(synthesize_blobs(5, 3, 0, 0.1, 1), DataError);   // k_true = 0
    CHECK_THROWS_AS(synthesize_blobs(5, 3, 2, 0.0, 1), DataError);   // spread = 0
    CHECK_THROWS_AS(synthesize_blobs(5, 3, 2, -1.0, 1), DataError);  // negative spread
}

TEST_CASE("synthesize_blobs centers are farther apart than the spread") {
    // Two blobs, labels alternate; compare within- and between-label spans.
    const double spread = 0.25;
    const BlobData blob = synthesize_blobs(40, 4, 2, spread, 5);
    double center0[4] = {0, 0, 0, 0}, center1[4] = {0, 0, 0, 0};
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t g = 0; g < 40; ++g) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (blob.true_labels[g] == 0) center0[c] += blob.matrix.values(g, c);
            else center1[c] += blob.matrix.values(g, c);
        }
        (blob.true_labels[g] == 0 ? n0 : n1)++;
    }
    double d2 = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        const double d = center0[c] / double(n0) - center1[c] / double(n1);
        d2 += d * d;
    }
    CHECK(std::sqrt(d2) > spread);
}
