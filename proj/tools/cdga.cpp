// cdga: command-line front end.
//
//   cdga <command> FILE [--item NAME] [--format text|json] [flags]

#include "cdga/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::filesystem::path resolve(const std::string& file) {
    std::filesystem::path p(file);
    if (p.is_relative())
        if (const char* wd = std::getenv("CDGA_WORKDIR"); wd && *wd)
            return std::filesystem::path(wd) / p;
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational models: cohomology, Toomer invariant, fibration twisting"};
    app.require_subcommand(1, 1);

    std::string file;
    std::string format = "text";
    cdga::CommandOptions opt;
    std::string item, a, omega;
    int max_degree = -1, formal_dim = -1;

    for (const auto& name : cdga::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("file", file, "input document")->required();
        sub->add_option("--item", item, "item to analyse (default: the last one)");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--max-degree", max_degree, "highest degree to compute")->check(CLI::NonNegativeNumber);
        sub->add_option("--formal-dim", formal_dim, "formal dimension")->check(CLI::NonNegativeNumber);
        if (name == "probe") {
            sub->add_option("--a", a, "base class");
            sub->add_option("--omega", omega, "fiber class");
        }
        if (name == "derivations")
            sub->add_flag("--nilpotent", opt.nilpotent, "decide existence of nilpotent derivations");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cdga::kParseError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (!item.empty())
        opt.item = item;
    if (max_degree >= 0)
        opt.max_degree = max_degree;
    if (formal_dim >= 0)
        opt.formal_dim = formal_dim;
    if (!a.empty())
        opt.a = a;
    if (!omega.empty())
        opt.omega = omega;

    const auto path = resolve(file);
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cdga: cannot read " << path.string() << "\n";
        return cdga::kParseError;
    }
    std::stringstream text;
    text << in.rdbuf();

    try {
        const auto doc = cdga::parse_spec(text.str());
        const auto report = cdga::run_command(doc, command, opt);
        std::cout << report.render(format);
        return report.exit_code;
    } catch (const cdga::ParseError& e) {
        std::cerr << path.string() << ":" << e.what() << "\n";
        return cdga::kParseError;
    } catch (const cdga::UsageError& e) {
        std::cerr << "cdga: " << e.what() << "\n";
        return cdga::kParseError;
    }
}
