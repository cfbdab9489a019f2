#include "support.hpp"

#include <rqlp/io.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

using namespace rqlp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "rqlp_unit_io";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

} // namespace

TEST_CASE("binary matrix round-trips bit-exactly")
{
    const fs::path p = scratch("a.rqlpmat");
    MatrixXd a = testing::random_matrix(7, 5, 3);
    a(0, 0) = -0.0;
    a(1, 0) = std::numeric_limits<double>::denorm_min();
    write_matrix(p, a);
    CHECK(fs::file_size(p) == 32 + 8 * 35);
    CHECK(testing::bit_equal(read_matrix(p), a));

    const std::string bytes = read_text(p);
    CHECK(bytes.substr(0, 8) == "RQLPMAT1");
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);  // version, little-endian
    CHECK(static_cast<unsigned char>(bytes[16]) == 7); // rows
    CHECK(static_cast<unsigned char>(bytes[24]) == 5); // cols
}

TEST_CASE("malformed matrix files are rejected")
{
    const fs::path p = scratch("bad.rqlpmat");
    std::ofstream(p) << "not a matrix";
    CHECK_THROWS_AS(read_matrix(p), IoError);
    write_matrix(p, MatrixXd::Ones(2, 2));
    fs::resize_file(p, fs::file_size(p) - 1);
    CHECK_THROWS_AS(read_matrix(p), IoError);
    CHECK_THROWS_AS(read_matrix(scratch("missing.rqlpmat")), IoError);
    CHECK_THROWS_AS(write_matrix("/nonexistent-dir/x.rqlpmat", MatrixXd::Ones(1, 1)), IoError);
}

TEST_CASE("meta sidecar round-trips")
{
    const fs::path p = scratch("a.meta");
    const std::vector<double> sig = {1.0, 0.1, 1.0 / 3.0, 5e-300};
    Meta m{{"family", "pds"}, {"sigmas", format_doubles(sig)}};
    write_meta(p, m);
    const Meta back = read_meta(p);
    CHECK(back == m);
    CHECK(parse_doubles(back.at("sigmas")) == sig);
    CHECK(meta_path("x/y.rqlpmat") == fs::path("x/y.rqlpmat.meta"));
    CHECK_THROWS_AS(write_meta(p, Meta{{"a=b", "c"}}), IoError);
}

TEST_CASE("CSV round-trips records with sv rows")
{
    ExperimentRecord r;
    r.algorithm = "sprqlp";
    r.family = "pds/t=30/s=2";
    r.n = 500;
    r.k = 40;
    r.p = 5;
    r.l1 = 45;
    r.l2 = 80;
    r.seed = 18446744073709551615ull;
    r.ef = 0.1234567890123456789;
    r.elapsed_s = 0.25;
    r.sv = {{1, 1.0, 0.99, 0.01, 0.01}, {2, 0.0, 1e-17, 1e-17, std::numeric_limits<double>::infinity()}};

    ExperimentRecord bad = r;
    bad.status = "rank_deficient";
    bad.ef = std::numeric_limits<double>::quiet_NaN();
    bad.sv.clear();

    const fs::path p = scratch("r.csv");
    append_records(p, {r});
    append_records(p, {bad});
    const std::string text = read_text(p);
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(text.find(kCsvHeader, 1) == std::string::npos); // header written once

    const auto back = read_csv(p);
    REQUIRE(back.size() == 2);
    CHECK(back[0].algorithm == r.algorithm);
    CHECK(back[0].family == r.family);
    CHECK(back[0].seed == r.seed);
    CHECK(back[0].ef == r.ef);
    CHECK(back[0].sv == r.sv);
    CHECK(back[1].status == "rank_deficient");
    CHECK(std::isnan(back[1].ef));
    CHECK(format_record(back[0]) == format_record(r));
}

TEST_CASE("CSV parser rejects malformed input")
{
    CHECK_THROWS_AS(parse_csv("wrong,header\n"), IoError);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\nsv,1,2,3,4,5\n"), IoError);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\nv1,qlp,pds,10,2\n"), IoError);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\nv1,qlp,pds,x,2,0,0,0,0,ok,0.1,0.0\n"), IoError);
    CHECK(parse_csv(std::string(kCsvHeader) + "\n").empty());
}
