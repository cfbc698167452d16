#include "artifacts.hpp"
#include "config.hpp"

#include "hwm/error.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
protected:
    static fs::path root() {
        static const fs::path dir = [] {
            auto d = fs::temp_directory_path() / ("hwm_cli_test_" + std::to_string(::getpid()));
            fs::remove_all(d);
            fs::create_directories(d);
            return d;
        }();
        return dir;
    }

    static fs::path write_config(const std::string& name, const std::string& text) {
        const fs::path p = root() / (name + ".ini");
        std::ofstream(p) << text;
        return p;
    }

    struct Result {
        int code;
        std::string err;
        fs::path out;
    };

    static Result run(const std::string& command, const std::string& name, const std::string& config,
                      const std::string& extra = "") {
        const fs::path cfg = write_config(name, config);
        const fs::path out = root() / name;
        const fs::path err = root() / (name + ".stderr");
        const std::string line = std::string(HWM_EXECUTABLE) + " " + command + " --config " + cfg.string() +
                                 " --out " + out.string() + " " + extra + " 2> " + err.string();
        const int status = std::system(line.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err), out};
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static json read_json(const fs::path& p) { return json::parse(slurp(p)); }

    // Numeric column `col` of a CSV file, header skipped.
    static std::vector<double> column(const fs::path& p, std::size_t col) {
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);
        std::vector<double> out;
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string cell;
            for (std::size_t i = 0; i <= col; ++i) std::getline(ss, cell, ',');
            out.push_back(std::stod(cell));
        }
        return out;
    }
};

const char* torus_soliton = R"([grid]
kind = torus
n = 256
[soliton]
m = 1
velocity = 0
)";

} // namespace

TEST(Artifacts, FormatRealRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(hwm::cli::format_real(v)), v);
    EXPECT_EQ(hwm::cli::format_real(std::nan("")), "nan");
}

TEST(Artifacts, Sha256KnownVector) {
    EXPECT_EQ(hwm::cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ConfigParsing, UnknownKeysAndBadNumbers) {
    const auto cfg = hwm::cli::Config::parse("[grid]\nkind = torus\nbogus = 1\n");
    EXPECT_THROW(cfg.validate({{"grid", {"kind", "n"}}}), hwm::DomainError);
    EXPECT_THROW(hwm::cli::Config::parse("[a]\nx = 1\n").validate({{"b", {"x"}}}), hwm::DomainError);
    const auto num = hwm::cli::Config::parse("[a]\nx = 1.5e\n");
    EXPECT_THROW(num.real("a", "x", 0.0), hwm::DomainError);
    EXPECT_EQ(hwm::cli::Config::parse("[a]\nx = 1, 2 ,3\n").reals("a", "x", {}), (std::vector<double>{1, 2, 3}));
}

TEST_F(CliTest, SolitonStaticResidual) {
    const auto r = run("soliton", "soliton_static", torus_soliton);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE(read_json(r.out / "residual.json").at("profile_residual").get<double>(), 1e-6);
    EXPECT_EQ(slurp(r.out / "snapshot.csv").substr(0, 12), "x,u1,u2,u3\n0");
    EXPECT_EQ(slurp(r.out / "invariants.csv").substr(0, 24), "t,E,S1,S2,S3,M,P,length\n");
}

TEST_F(CliTest, SolitonDegreeZeroIsConstant) {
    const auto r = run("soliton", "soliton_zero", "[grid]\nkind = torus\nn = 64\n[soliton]\nm = 0\n");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_json(r.out / "residual.json").at("energy").get<double>(), 0.0);
}

TEST_F(CliTest, SupersonicVelocityRejected) {
    const auto r = run("soliton", "soliton_fast", "[grid]\nkind = torus\nn = 64\n[soliton]\nvelocity = 1.2\n");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("no nonconstant profile for |v| >= 1"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownKeyRejected) {
    const auto r = run("soliton", "soliton_unknown", std::string(torus_soliton) + "speed = 3\n");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("speed"), std::string::npos);
}

TEST_F(CliTest, EvolveCircleWaveFinalError) {
    const auto r = run("evolve", "evolve_circle", R"([grid]
kind = torus
n = 512
[initial]
type = circle_wave
m = 2
velocity = 0.5
[integrator]
dt = 1e-3
t_end = 1
record_every = 250
)");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto fe = read_json(r.out / "final_error.json");
    EXPECT_DOUBLE_EQ(fe.at("t").get<double>(), 1.0);
    EXPECT_LE(fe.at("sup_error").get<double>(), 1e-4);
    EXPECT_EQ(column(r.out / "invariants.csv", 0).size(), 5u);
}

TEST_F(CliTest, EvolveConstantHasZeroDrift) {
    const auto r = run("evolve", "evolve_constant", R"([grid]
kind = torus
n = 64
[initial]
type = constant
value = 0.6, 0, 0.8
[integrator]
dt = 1e-2
t_end = 0.5
record_every = 10
)");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto d = read_json(r.out / "drift.json");
    for (const char* q : {"energy", "spin", "mass", "length"}) EXPECT_EQ(d.at(q).at("max_abs").get<double>(), 0.0) << q;
}

TEST_F(CliTest, SeededRunIsByteIdentical) {
    const std::string cfg = R"([grid]
kind = torus
n = 128
[initial]
type = circle_wave
m = 1
perturbation_amplitude = 0.3
[integrator]
dt = 2e-3
t_end = 0.2
record_every = 20
)";
    const auto a = run("evolve", "seeded_a", cfg, "--seed 1234");
    const auto b = run("evolve", "seeded_b", cfg, "--seed 1234");
    const auto c = run("evolve", "seeded_c", cfg, "--seed 99");
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0);
    ASSERT_EQ(c.code, 0);
    EXPECT_EQ(slurp(a.out / "invariants.csv"), slurp(b.out / "invariants.csv"));
    EXPECT_EQ(read_json(a.out / "manifest.json").at("files"), read_json(b.out / "manifest.json").at("files"));
    EXPECT_NE(slurp(a.out / "invariants.csv"), slurp(c.out / "invariants.csv"));
    EXPECT_EQ(read_json(a.out / "manifest.json").at("seed").get<std::uint64_t>(), 1234u);
}

TEST_F(CliTest, ManifestListsEveryFileAndRerunClearsStaleOnes) {
    const std::string cfg = R"([grid]
kind = torus
n = 64
[initial]
type = circle_wave
[integrator]
dt = 1e-2
t_end = 0.1
record_every = 1
)";
    auto r = run("evolve", "manifest", cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_TRUE(fs::exists(r.out / "snapshot_00010.csv"));
    // Coarser rerun: the earlier snapshot files must not survive.
    r = run("evolve", "manifest", cfg + "[output]\nsnapshot_every = 5\n");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(fs::exists(r.out / "snapshot_00001.csv"));
    std::set<std::string> listed;
    const json manifest = read_json(r.out / "manifest.json");
    for (const auto& f : manifest.at("files")) {
        listed.insert(f.at("path").get<std::string>());
        EXPECT_EQ(f.at("sha256").get<std::string>(), hwm::cli::sha256_hex(slurp(r.out / f.at("path").get<std::string>())));
    }
    for (const auto& e : fs::directory_iterator(r.out)) {
        const auto name = e.path().filename().string();
        if (name != "manifest.json") EXPECT_TRUE(listed.contains(name)) << name;
    }
    EXPECT_FALSE(fs::exists(r.out / ".hwm.lock"));
}

TEST_F(CliTest, LockedDirectoryIsAGuardError) {
    const fs::path out = root() / "locked";
    fs::create_directories(out);
    std::ofstream(out / ".hwm.lock") << "1\n";
    const auto r = run("soliton", "locked", torus_soliton);
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(fs::exists(out / "residual.json"));
}

TEST_F(CliTest, LaxGroundStateHilbertSchmidt) {
    const auto r = run("lax", "lax_q1", R"([grid]
kind = window
n = 4096
half_width = 200
[soliton]
m = 1
[lax]
p = 2
dense_limit = 0
)");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto s = read_json(r.out / "schatten.json").at("snapshots").at(0);
    EXPECT_NEAR(s.at("norms").at(0).get<double>(), std::sqrt(8.0), 0.02 * std::sqrt(8.0));
}

TEST_F(CliTest, LaxRationalDataKeepsRankFour) {
    const auto r = run("lax", "lax_rank", R"([grid]
kind = window
n = 1024
half_width = 50
[initial]
type = periodic_orbit
[integrator]
dt = 1e-2
t_end = 0.2
record_every = 10
[invariants]
base_point = 0, 0, 1
[lax]
tau_rel = 1e-3
p = 1, 2
)");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ranks = column(r.out / "rank.csv", 1);
    ASSERT_EQ(ranks.size(), 3u);
    for (double k : ranks) EXPECT_EQ(k, 4.0);
}

TEST_F(CliTest, LaxConstantDataIsZero) {
    const auto r = run("lax", "lax_const", R"([grid]
kind = torus
n = 64
[initial]
type = constant
[integrator]
dt = 1e-2
t_end = 0.04
[lax]
dt_fd = 1e-2
)");
    ASSERT_EQ(r.code, 0) << r.err;
    const json schatten = read_json(r.out / "schatten.json");
    for (const auto& s : schatten.at("snapshots")) {
        for (const auto& v : s.at("norms")) EXPECT_EQ(v.get<double>(), 0.0);
        EXPECT_TRUE(s.at("sigma1_zero").get<bool>());
    }
    for (double v : column(r.out / "lax_residual.csv", 1)) EXPECT_EQ(v, 0.0);
}

TEST_F(CliTest, SpectrumDegreeOne) {
    const auto r = run("spectrum", "spectrum_m1", R"([grid]
kind = window
n = 2048
half_width = 100
[spectrum]
operators = Lplus, Lminus
degrees = 1
jacobi_cutoff = 32
)");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_json(r.out / "spectrum_Lplus_m1.json").at("bound_count").get<int>(), 2);
    EXPECT_EQ(read_json(r.out / "spectrum_Lminus_m1.json").at("near_zero_bound").get<int>(), 2);
    EXPECT_TRUE(fs::exists(r.out / "jacobi_m1.json"));
}

TEST_F(CliTest, SpectrumResolutionGuard) {
    const auto r = run("spectrum", "spectrum_coarse", "[grid]\nkind = window\nn = 512\nhalf_width = 50\n");
    EXPECT_EQ(r.code, 3);
}
