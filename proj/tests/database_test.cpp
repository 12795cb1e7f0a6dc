#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "netoutlier/database.hpp"
#include "netoutlier/errors.hpp"
#include "netoutlier/synth.hpp"

using namespace netoutlier;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "netoutlier_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void rewrite(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

NetworkDatabase tiny_db() {
    NetworkDatabase db;
    db.node_ids = {"a", "b", "c"};
    db.shared_edges = {{0, 1}, {1, 2}};
    db.samples.resize(2);
    db.samples[0].sample_id = "s0";
    db.samples[0].values = Eigen::Vector3d(1.0, 2.0, 3.0);
    db.samples[0].missing_mask = {false, false, false};
    db.samples[1].sample_id = "s1";
    db.samples[1].values = Eigen::Vector3d(4.0, 0.0, 6.0);
    db.samples[1].missing_mask = {false, true, false};
    db.samples[1].edge_override = EdgeSet{{0, 2}};
    db.labels = std::map<std::string, int>{{"s0", 0}, {"s1", 1}};
    return db;
}

}  // namespace

TEST_SUITE("database") {

TEST_CASE("synthetic roundtrip is lossless") {
    SynthConfig cfg;
    cfg.n_nodes = 15;
    cfg.n_samples = 12;
    cfg.n_outliers = 2;
    cfg.planted_size = 4;
    cfg.seed = 3;
    auto [db, truth] = generate_synthetic(cfg);
    const fs::path dir = scratch("roundtrip");
    save_database(db, dir.string());
    const NetworkDatabase back = load_database(dir.string());
    CHECK(back == db);
}

TEST_CASE("missing cells and edge overrides roundtrip") {
    const NetworkDatabase db = tiny_db();
    const fs::path dir = scratch("masked");
    save_database(db, dir.string());
    const NetworkDatabase back = load_database(dir.string());
    CHECK(back == db);
    CHECK(back.samples[1].missing_mask[1]);
    CHECK(effective_edges(back, "s1") == EdgeSet{{0, 2}});
    CHECK(effective_edges(back, "s0") == db.shared_edges);
}

TEST_CASE("impute_missing fills node means and is idempotent") {
    NetworkDatabase db = tiny_db();
    const NetworkDatabase filled = impute_missing(db);
    // node b: only s0 contributes (value 2)
    CHECK(filled.samples[1].values[1] == doctest::Approx(2.0));
    CHECK(filled.samples[1].missing_mask[1]);  // mask preserved
    CHECK(impute_missing(filled) == filled);

    // a node that is missing everywhere imputes to zero
    db.samples[0].missing_mask[1] = true;
    db.samples[0].values[1] = 0.0;
    const NetworkDatabase all_missing = impute_missing(db);
    CHECK(all_missing.samples[0].values[1] == 0.0);
    CHECK(all_missing.samples[1].values[1] == 0.0);
}

TEST_CASE("loader rejects malformed inputs") {
    const fs::path dir = scratch("bad");
    CHECK_THROWS_AS(load_database((dir / "nowhere").string()), IoError);

    save_database(tiny_db(), dir.string());
    SUBCASE("missing topology") {
        fs::remove(dir / "topology.json");
        CHECK_THROWS_AS(load_database(dir.string()), FormatError);
    }
    SUBCASE("row length mismatch names the row") {
        rewrite(dir / "values.csv", "sample_id,a,b,c\ns0,1,2,3\ns1,4,5\n");
        CHECK_THROWS_WITH_AS(load_database(dir.string()),
                             doctest::Contains("s1"), ValidationError);
    }
    SUBCASE("duplicate sample id") {
        rewrite(dir / "values.csv", "sample_id,a,b,c\ns0,1,2,3\ns0,4,5,6\n");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
    SUBCASE("header disagrees with topology") {
        rewrite(dir / "values.csv", "sample_id,a,c,b\ns0,1,2,3\ns1,4,5,6\n");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
    SUBCASE("label outside 0/1") {
        rewrite(dir / "labels.csv", "sample_id,label\ns0,2\ns1,1\n");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
    SUBCASE("label for unknown sample") {
        rewrite(dir / "labels.csv", "sample_id,label\ns0,0\nsX,1\n");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
    SUBCASE("edge out of range") {
        rewrite(dir / "topology.json", R"({"nodes":["a","b","c"],"edges":[[0,7]]})");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
    SUBCASE("self loop") {
        rewrite(dir / "topology.json", R"({"nodes":["a","b","c"],"edges":[[1,1]]})");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
    SUBCASE("unparsable cell") {
        rewrite(dir / "values.csv", "sample_id,a,b,c\ns0,1,zap,3\ns1,4,5,6\n");
        CHECK_THROWS_AS(load_database(dir.string()), FormatError);
    }
    SUBCASE("single sample rejected") {
        rewrite(dir / "values.csv", "sample_id,a,b,c\ns0,1,2,3\n");
        fs::remove(dir / "labels.csv");
        CHECK_THROWS_AS(load_database(dir.string()), ValidationError);
    }
}

TEST_CASE("edges are normalized to sorted unique i<j") {
    const fs::path dir = scratch("norm");
    save_database(tiny_db(), dir.string());
    rewrite(dir / "topology.json", R"({"nodes":["a","b","c"],"edges":[[2,1],[0,1],[1,2]]})");
    const NetworkDatabase db = load_database(dir.string());
    CHECK(db.shared_edges == EdgeSet{{0, 1}, {1, 2}});
}

TEST_CASE("sample_index finds ids and rejects unknowns") {
    const NetworkDatabase db = tiny_db();
    CHECK(db.sample_index("s1") == 1);
    CHECK_THROWS_AS(db.sample_index("nope"), ValidationError);
}

}  // TEST_SUITE
