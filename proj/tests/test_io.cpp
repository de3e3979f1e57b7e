#include "simhd/config.hpp"
#include "simhd/snapshot.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <sstream>

using namespace simhd;
using Catch::Matchers::WithinRel;

TEST_CASE("config defaults per problem id") {
    SECTION("rp1 inherits the published setup") {
        ProblemConfig c = config_from_text("problem = rp1\n");
        REQUIRE(c.dim == 1);
        REQUIRE(c.nx == 1000);
        REQUIRE_THAT(c.gamma, WithinRel(5.0 / 3.0, 1e-15));
        REQUIRE(c.cfl == 0.9);
        REQUIRE(c.t_final == 0.1);
        REQUIRE(c.bc_x == Bc::Transmissive);
    }
    SECTION("rotor inherits the 1000^2 mesh, overridable") {
        ProblemConfig c = config_from_text("problem = rotor\n");
        REQUIRE(c.nx == 1000);
        REQUIRE(c.ny == 1000);
        c = config_from_text("problem = rotor\nnx = 128\nny = 64\n");
        REQUIRE(c.nx == 128);
        REQUIRE(c.ny == 64);
    }
    SECTION("an override-free config is pure defaults") {
        for (const std::string& id : problem_ids()) {
            ProblemConfig c = config_from_text("problem = " + id + "\n");
            ProblemConfig d = default_config(id);
            REQUIRE(c == d);
        }
    }
    SECTION("sections and comments are accepted") {
        ProblemConfig c = config_from_text(
            "# comment\n[problem]\nproblem = rp0\n[mesh]\nnx = 50\n");
        REQUIRE(c.nx == 50);
        REQUIRE(c.dt_fixed == 0.1);
    }
}

TEST_CASE("config errors") {
    REQUIRE_THROWS_AS(config_from_text("problem = nosuch\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("problem = rp1\nbogus_key = 1\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("nx = 10\n"), ConfigError); // no problem id
    REQUIRE_THROWS_AS(config_from_text("problem = rp1\nny = 4\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("problem = rp1\nbc_y = periodic\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("problem = rp1\ncfl = 1.5\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("problem = rp1\nnx = 1.5\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("[nosuch]\nproblem = rp1\n"), ConfigError);
    REQUIRE_THROWS_AS(config_from_text("problem = rp1\nproblem = rp2\n"), ConfigError);
    REQUIRE_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("config round trip through the flat text format") {
    for (const std::string& id : problem_ids()) {
        ProblemConfig c = default_config(id);
        c.nx = 33;
        if (c.dim == 2) c.ny = 17;
        c.cfl = 0.75;
        ProblemConfig back = config_from_text(config_to_text(c));
        REQUIRE(back == c);
    }
}

TEST_CASE("CSV snapshots") {
    auto c = default_config("rotor");
    c.nx = c.ny = 2;
    Sim2D sim = make_sim_2d(c);
    std::ostringstream os;
    write_snapshot_csv(os, sim, c.eos());
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    REQUIRE(line.rfind("# t=", 0) == 0);
    std::getline(is, line);
    REQUIRE(line == "x,y,rho,u,v,w,p,Bx,By,Bz,divB");
    int rows = 0;
    std::vector<std::string> data;
    while (std::getline(is, line))
        if (!line.empty()) {
            ++rows;
            data.push_back(line);
        }
    REQUIRE(rows == 4);

    // full precision round trip of the density column
    const std::string& row = data[0];
    std::size_t a = row.find(','), b = row.find(',', a + 1);
    const double rho = std::stod(row.substr(b + 1));
    REQUIRE(rho == cons_to_prim(sim.q(0, 0), c.eos()).rho);
}

TEST_CASE("VTK snapshots start with the legacy preamble") {
    auto c = default_config("rotor");
    c.nx = c.ny = 4;
    Sim2D sim = make_sim_2d(c);
    std::ostringstream os;
    write_snapshot_vtk(os, sim, c.eos());
    REQUIRE(os.str().rfind("# vtk DataFile Version", 0) == 0);
    REQUIRE(os.str().find("DATASET STRUCTURED_POINTS") != std::string::npos);
    REQUIRE(os.str().find("SCALARS rho double 1") != std::string::npos);
    REQUIRE(os.str().find("VECTORS B double") != std::string::npos);
}

TEST_CASE("manifest echoes a re-parseable config") {
    ProblemConfig c = default_config("shear_layer");
    c.nx = 40;
    std::ostringstream os;
    write_manifest(os, c, RunSummary{}, 1.25, 400);
    ProblemConfig back = config_from_text(os.str());
    REQUIRE(back == c);
    REQUIRE(os.str().find("us_per_cell_step") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical snapshots") {
    auto c = default_config("rp0");
    c.nx = 24;
    c.t_final = 0.5;
    auto run_once = [&]() {
        Sim1D sim = make_sim_1d(c);
        run_1d(sim, c.solver(), c.control());
        std::ostringstream os;
        write_snapshot_csv(os, sim, c.eos());
        return os.str();
    };
    REQUIRE(run_once() == run_once());
}

TEST_CASE("the problem registry") {
    REQUIRE(problem_ids().size() == 13);
    for (const std::string& id : problem_ids()) REQUIRE_NOTHROW(default_config(id));
}
