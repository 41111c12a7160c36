#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out;
    json parsed() const { return json::parse(out); }
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("melnikov_cli_" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

Run cli(const std::string& args) {
    const std::string cmd = std::string(MELNIKOV_CLI) + " " + args + " --out " + (scratch() / "runs").string();
    FILE* p = ::popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int raw = ::pclose(p);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, TriangleWorkedExample) {
    auto r = cli("d4 --paper-example");
    ASSERT_EQ(r.status, 0) << r.out;
    auto j = r.parsed();
    EXPECT_EQ(j["chain"]["q1"]["text"], "L*(-1/6)");
    EXPECT_EQ(j["chain"]["M3"]["c_m1"], "-3/32");
    EXPECT_EQ(j["chain"]["M3"]["c_star"], "1/1");
    EXPECT_EQ(j["ode"]["order"], 3);
    EXPECT_EQ(j["ode"]["coeffs"][3], json({"0/1", "0/1", "8192/1", "4864/1", "860/1", "39/1"}));
    EXPECT_EQ(j["ode"]["singular_points"], json({"-4/1", "0/1", "inf"}));
    EXPECT_EQ(j["local_exponents"]["0/1"]["exact"], json({"-1/1", "0/1", "0/1"}));
    const fs::path dir = j["job_dir"].get<std::string>();
    EXPECT_TRUE(fs::exists(dir / "config.json"));
    EXPECT_TRUE(fs::exists(dir / "result.json"));
}

TEST(Cli, MelnikovJsonIsDeterministic) {
    const std::string args = "melnikov --ham eight-loop --annulus exterior --form \"y^3 dx\"";
    auto a = cli(args);
    ASSERT_EQ(a.status, 0) << a.out;
    const fs::path dir = a.parsed()["job_dir"].get<std::string>();
    const std::string first = slurp(dir / "result.json");
    auto b = cli(args);
    ASSERT_EQ(b.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(slurp(dir / "result.json"), first);

    auto m = a.parsed()["chain"]["M"];
    EXPECT_EQ(m["k"], 1);
    EXPECT_EQ(m["alpha"], json({"-3/7", "12/7"}));
    EXPECT_EQ(m["gamma"], json({"3/7"}));
    EXPECT_TRUE(a.parsed()["shape_violations"].empty());
}

TEST(Cli, PairingReport) {
    auto r = cli("pair --word \"[g1,g2]\"");
    ASSERT_EQ(r.status, 0) << r.out;
    auto j = r.parsed();
    EXPECT_NEAR(j["pairing"]["value"]["re"].get<double>(), -39.4784176, 1e-6);
    EXPECT_EQ(j["homology_class"], json({0, 0, 0, 0}));
    EXPECT_TRUE(j["pairing"]["well_defined"].get<bool>());
}

TEST(Cli, SampleCsvCarriesSource) {
    auto r = cli("sample --ham eight-loop --annulus exterior --integrand I0 --t-grid 0.5:2:4");
    ASSERT_EQ(r.status, 0) << r.out;
    const std::string csv = slurp(r.parsed()["csv"].get<std::string>());
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,value,source");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_NE(line.find(",quadrature"), std::string::npos) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 4);
}

TEST(Cli, ErrorExitCodes) {
    auto bad_ham = cli("melnikov --ham nope --form \"y dx\"");
    EXPECT_EQ(bad_ham.status, 2);
    EXPECT_EQ(bad_ham.parsed()["error"]["kind"], "validation");

    auto bad_form = cli("melnikov --ham eight-loop --annulus exterior --form \"y^^ dx\"");
    EXPECT_EQ(bad_form.status, 2);

    auto shape = cli("d4 --form \"x y dy\"");
    EXPECT_EQ(shape.status, 3);
    EXPECT_EQ(shape.parsed()["error"]["kind"], "shape");

    auto outside = cli("sample --ham eight-loop --annulus exterior --integrand I0 --t-grid 0.1");
    EXPECT_EQ(outside.status, 2);
}
