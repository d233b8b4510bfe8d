// Command-line front end for the vfpph pipeline.

#include <map>
#include <regex>
#include <string>

#include <CLI11.hpp>

#include "vfpph/cli.hpp"

namespace {

using vfpph::cli::Command;
using vfpph::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("-o,--output", cfg.output, "Output file (default: stdout)");
    sub->add_option("--format", cfg.input_format, "Input format: csv or json (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tau", cfg.tau, "Parallel-vector tolerance in radians")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular patterns of planar vector fields via persistent path homology"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string grid = "10x10";

    std::map<std::string, Command> commands;
    auto sub = [&](const char* name, const char* help, Command c) {
        auto* s = app.add_subcommand(name, help);
        commands[name] = c;
        add_common(s, cfg);
        return s;
    };

    auto* gen = sub("gen", "Sample a logarithmic-spiral field", Command::Gen);
    gen->add_option("--grid", grid, "Grid size COLSxROWS")->default_val("10x10");
    gen->add_option("--eps", cfg.eps, "Grid spacing")->default_val(1.0);
    gen->add_option("--x0", cfg.x0, "Grid origin x");
    gen->add_option("--y0", cfg.y0, "Grid origin y");
    gen->add_option("--a", cfg.a, "Chirality/scale (nonzero)")->default_val(1.0);
    gen->add_option("--alpha", cfg.alpha, "Spiral pitch angle in (0, pi)");
    gen->add_option("--rho", cfg.rho, "Width-to-height ratio")->default_val(1.0);
    gen->add_option("--cx", cfg.cx, "Singularity x (default: near grid middle)");
    gen->add_option("--cy", cfg.cy, "Singularity y (default: near grid middle)");
    gen->add_option("--out-format", cfg.output_format, "csv or json (default: from output extension)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* validate = sub("validate", "Check sampling assumptions", Command::Validate);
    validate->add_option("field", cfg.inputs, "Field file")->required()->expected(1);

    auto* dump = sub("dump-digraph", "Write the angle-based grid digraph as JSON", Command::DumpDigraph);
    dump->add_option("field", cfg.inputs, "Field file")->required()->expected(1);
    dump->add_option("--svg", cfg.svg, "Also render the digraph to SVG");

    auto* pers = sub("persistence", "One-dimensional persistence diagram", Command::Persistence);
    pers->add_option("input", cfg.inputs, "Field file or dumped digraph JSON")->required()->expected(1);
    pers->add_option("--out-format", cfg.output_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* locate = sub("locate", "Locate singularities", Command::Locate);
    locate->add_option("field", cfg.inputs, "Field file")->required()->expected(1);
    locate->add_option("--svg", cfg.svg, "Render digraph with singularity markers");

    auto* polygon = sub("polygon", "Extract singular polygons", Command::Polygon);
    polygon->add_option("field", cfg.inputs, "Field file")->required()->expected(1);
    polygon->add_option("--svg", cfg.svg, "Render the reduced digraph with the polygon filled");

    auto* compare = sub("compare", "Distance between two fields' diagrams", Command::Compare);
    compare->add_option("fields", cfg.inputs, "Two field files")->required()->expected(2);
    compare->add_option("--metric", cfg.metric, "bottleneck or wasserstein")
        ->check(CLI::IsMember({"bottleneck", "wasserstein"}));
    compare->add_option("--q", cfg.q, "Wasserstein order (>= 1)")->default_val(1.0);

    auto* series = sub("series", "Bottleneck distances between consecutive fields", Command::Series);
    series->add_option("manifest", cfg.inputs, "File listing one field path per line")->required()->expected(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    for (const auto& [name, c] : commands)
        if (app.got_subcommand(name)) cfg.command = c;

    if (cfg.command == Command::Gen) {
        std::smatch m;
        if (!std::regex_match(grid, m, std::regex(R"((\d+)x(\d+))"))) {
            std::cerr << "error: --grid expects COLSxROWS, got '" << grid << "'\n";
            return 2;
        }
        cfg.cols = std::stoi(m[1]);
        cfg.rows = std::stoi(m[2]);
    }
    return vfpph::cli::run(cfg);
}
