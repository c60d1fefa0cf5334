#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "schottky/cli.hpp"

int main(int argc, char** argv) {
    using namespace schottky::cli;
    RunConfig cfg;
    CLI::App app{"Schottky groups over valued fields"};
    app.require_subcommand(1);

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input_path, "SchottkyPoint JSON file");
        sub->add_option("--json", cfg.json_text, "inline SchottkyPoint JSON");
        sub->add_option("--prec", cfg.prec_bits, "working precision in bits for approximate coordinates");
    };
    auto* verify = app.add_subcommand("verify", "Schottky-basis criterion and basis search");
    add_input(verify);
    verify->add_option("--nielsen-depth", cfg.nielsen_depth);
    auto* limitset = app.add_subcommand("limitset", "nested discs of the limit set");
    add_input(limitset);
    limitset->add_option("--depth", cfg.depth);
    limitset->add_option("--budget", cfg.budget);
    limitset->add_option("--out", cfg.out, "SVG output path (archimedean)");
    auto* skeleton = app.add_subcommand("skeleton", "metric graph of the Mumford curve");
    add_input(skeleton);
    skeleton->add_option("--nielsen-depth", cfg.nielsen_depth);
    skeleton->add_option("--word-length", cfg.word_length);
    auto* act = app.add_subcommand("act", "apply a Nielsen word");
    add_input(act);
    act->add_option("--word", cfg.word, "e.g. \"s3,s2'\"")->required();
    auto* hybrid = app.add_subcommand("hybrid", "hybrid degeneration table");
    hybrid->add_option("--r", cfg.r, "comma separated radii in (0,1)");
    hybrid->add_option("--eps-grid", cfg.eps_grid);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kMalformed;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    CmdResult res = run(cfg);
    if (!res.svg.empty()) {
        std::ofstream out(cfg.out);
        if (!out) {
            std::cerr << "cannot write " << cfg.out << "\n";
            return kFailure;
        }
        out << res.svg;
    }
    std::cout << schottky::io::dump(res.report);
    if (res.report.contains("error")) std::cerr << res.report["error"]["message"].get<std::string>() << "\n";
    return res.exit;
}
