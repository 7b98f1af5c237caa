#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace
{
struct Result
{
    int code;
    std::string output;
};

// Run the CLI with stderr folded into the captured output
Result cli(std::string const& args)
{
    std::string const cmd = std::string(KDMC_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
    {
        out.append(buf, n);
    }
    int const status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_file(fs::path const& p, std::string const& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

std::string first_line(std::string const& s)
{
    return s.substr(0, s.find('\n'));
}

std::size_t line_count(std::string const& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

struct TempDir
{
    fs::path path;
    TempDir()
        : path(fs::temp_directory_path() / ("kdmc_cli_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(std::string const& name) const { return (path / name).string(); }
};
}  // namespace

TEST_CASE("run")
{
    TempDir tmp;
    write_file(tmp / "kin.ini",
               "[simulation]\nmode = kinetic\nparticles = 10000000\nt_end = 1\n"
               "[source]\nposition = 0.5, 0.5\nmean_speed = 0.15625\n"
               "[background]\nrate = 0.78125\nmean_speed = 0.013847\n");

    auto const r = cli("run --config " + (tmp / "kin.ini") + " --particles 1000 --threads 1 --out "
                       + (tmp / "a"));
    REQUIRE(r.code == 0);
    CHECK(r.output.find("particles = 1000\n") != std::string::npos);
    std::string const hist = slurp(tmp / "a/histogram.csv");
    CHECK(first_line(hist).rfind("128,128,", 0) == 0);
    CHECK(line_count(hist) == 129);
    std::string const summary = slurp(tmp / "a/summary.txt");
    CHECK(summary.find("particles = 1000\n") != std::string::npos);
    CHECK(summary.find("absorbed_fraction = ") != std::string::npos);
    CHECK(summary.find("wall_seconds = ") != std::string::npos);

    SUBCASE("repeatable and independent of the thread count")
    {
        auto const again = cli("run --config " + (tmp / "kin.ini")
                               + " --particles 1000 --threads 4 --out " + (tmp / "b"));
        REQUIRE(again.code == 0);
        CHECK(slurp(tmp / "b/histogram.csv") == hist);
    }
    SUBCASE("mode and seed overrides")
    {
        auto const kd = cli("run --config " + (tmp / "kin.ini")
                            + " --particles 1000 --mode kdmc --seed 7 --out " + (tmp / "c"));
        REQUIRE(kd.code == 0);
        CHECK(kd.output.find("mode = kdmc\n") != std::string::npos);
        CHECK(kd.output.find("seed = 7\n") != std::string::npos);
        CHECK(slurp(tmp / "c/histogram.csv") != hist);
    }
}

TEST_CASE("invalid input exits with status 2")
{
    TempDir tmp;
    write_file(tmp / "bad.ini", "[simulation]\nparticles = 10\nfoo=1\n");
    auto const r = cli("run --config " + (tmp / "bad.ini") + " --out " + (tmp / "x"));
    CHECK(r.code == 2);
    CHECK(r.output.find("bad.ini:3:") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp / "x/histogram.csv"));

    write_file(tmp / "outside.ini", "[source]\nposition = 2, 0.5\n");
    CHECK(cli("run --config " + (tmp / "outside.ini")).code == 2);
    CHECK(cli("run --config " + (tmp / "missing.ini")).code == 2);
    CHECK(cli("run --mode hybrid").code == 2);
    CHECK(cli("run --particles 0").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("").code == 2);
    CHECK(cli("--help").code == 0);
}

TEST_CASE("compare")
{
    TempDir tmp;
    REQUIRE(cli("run --particles 2000 --out " + (tmp / "k")).code == 0);
    REQUIRE(cli("run --particles 2000 --mode kdmc --out " + (tmp / "d")).code == 0);

    auto const same = cli("compare " + (tmp / "k/histogram.csv") + " " + (tmp / "k/histogram.csv")
                          + " --out " + (tmp / "same"));
    REQUIRE(same.code == 0);
    CHECK(same.output.find("l2_norm = 0\n") != std::string::npos);

    auto const diff = cli("compare " + (tmp / "k/histogram.csv") + " " + (tmp / "d/histogram.csv")
                          + " --out " + (tmp / "kd"));
    REQUIRE(diff.code == 0);
    CHECK(diff.output.find("l2_norm = 0\n") == std::string::npos);
    CHECK(first_line(slurp(tmp / "kd/difference.csv")).rfind("128,128,", 0) == 0);
    std::string const prof = slurp(tmp / "kd/difference_profile.csv");
    CHECK(first_line(prof) == "x,value");
    CHECK(line_count(prof) == 65);

    // Swapping the arguments flips the sign of the difference
    REQUIRE(cli("compare " + (tmp / "d/histogram.csv") + " " + (tmp / "k/histogram.csv")
                + " --out " + (tmp / "dk"))
                .code
            == 0);
    std::string const kd_rows = slurp(tmp / "kd/difference_profile.csv");
    std::string const dk_rows = slurp(tmp / "dk/difference_profile.csv");
    std::istringstream a(kd_rows), b(dk_rows);
    std::string la, lb;
    std::getline(a, la);
    std::getline(b, lb);
    while (std::getline(a, la) && std::getline(b, lb))
    {
        double const va = std::stod(la.substr(la.find(',') + 1));
        double const vb = std::stod(lb.substr(lb.find(',') + 1));
        CHECK(va == -vb);
    }

    write_file(tmp / "small.csv", "2,2,0\n0.25,0.25\n0.25,0.25\n");
    CHECK(cli("compare " + (tmp / "k/histogram.csv") + " " + (tmp / "small.csv")).code == 2);
    write_file(tmp / "broken.csv", "2,2,0\n0.25\n");
    CHECK(cli("compare " + (tmp / "broken.csv") + " " + (tmp / "small.csv")).code == 2);
}

TEST_CASE("sweeps")
{
    TempDir tmp;
    auto const kin = cli("sweep kinetic --particles 2000 --out " + (tmp / "kin"));
    REQUIRE(kin.code == 0);
    CHECK(kin.output.find("fitted order") != std::string::npos);
    std::string const conv = slurp(tmp / "kin/kinetic_convergence.csv");
    CHECK(first_line(conv) == "delta_t,error");
    CHECK(line_count(conv) == 6);
    CHECK(first_line(slurp(tmp / "kin/kinetic_runtime.csv")) == "delta_t,time_kinetic,time_kdmc");

    auto const diff = cli("sweep diffusive --particles 100 --out " + (tmp / "diff"));
    REQUIRE(diff.code == 0);
    CHECK(diff.output.find("fitted order") != std::string::npos);
    std::string const dconv = slurp(tmp / "diff/diffusive_convergence.csv");
    CHECK(first_line(dconv) == "Rcx,error");
    CHECK(line_count(dconv) == 17);
    CHECK(dconv.find("\n0.0078125,") != std::string::npos);
    CHECK(dconv.find("\n256") != std::string::npos);
    CHECK(first_line(slurp(tmp / "diff/diffusive_runtime.csv")) == "Rcx,time_kinetic,time_kdmc");
    std::string const prof = slurp(tmp / "diff/diffusive_profiles.csv");
    CHECK(first_line(prof).rfind("x,0.0078125,", 0) == 0);
    CHECK(line_count(prof) == 65);
}
