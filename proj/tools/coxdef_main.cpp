// coxdef: deform a reflection generating set of a Coxeter group until every
// pair is sharp-angled, emitting a machine-checkable certificate trace.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "coxdef/pipeline.hpp"
#include "json.hpp"

namespace {

struct CommonOpts {
    std::string input;
    std::string output;
    long order_cap = 0;        // 0 = keep the instance value
    long group_cap = 0;        // 0 = keep the instance value
    bool deterministic = true;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input", o.input, "instance JSON file")->required();
    cmd->add_option("--output", o.output, "write the result here instead of stdout");
    cmd->add_option("--order-cap", o.order_cap, "override options.order_cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--group-cap", o.group_cap, "override options.group_cap")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--deterministic,!--no-deterministic", o.deterministic,
                  "deterministic edge selection and output (default on)");
}

coxdef::ProblemInstance load_with(const CommonOpts& o) {
    coxdef::ProblemInstance inst = coxdef::load(o.input);
    if (o.order_cap > 0) inst.options.order_cap = o.order_cap;
    if (o.group_cap > 0) inst.options.group_cap = static_cast<std::size_t>(o.group_cap);
    inst.options.deterministic = o.deterministic;
    return inst;
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(o.output);
    if (!out) throw coxdef::ParseError("cannot open output file \"" + o.output + "\"");
    out << text << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw coxdef::ParseError("cannot open trace file \"" + path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coxdef: sharpen reflection generating sets of Coxeter groups"};
    app.require_subcommand(1);

    CommonOpts o_sharpen, o_noh3, o_analyze, o_oracle, o_verify;
    std::string trace_path;

    CLI::App* c_sharpen =
        app.add_subcommand("sharpen", "deform S step by step until every pair is sharp-angled");
    add_common(c_sharpen, o_sharpen);

    CLI::App* c_noh3 = app.add_subcommand(
        "sharpen-no-h3", "sharpen, rejecting diagrams that contain an H3 triple");
    add_common(c_noh3, o_noh3);

    CLI::App* c_analyze =
        app.add_subcommand("analyze", "classify the edges of the diagram of S");
    add_common(c_analyze, o_analyze);

    CLI::App* c_oracle = app.add_subcommand(
        "oracle", "brute-force sharpness cross-check by full group enumeration");
    add_common(c_oracle, o_oracle);

    CLI::App* c_verify =
        app.add_subcommand("verify", "replay a sharpening trace against its instance");
    add_common(c_verify, o_verify);
    c_verify->add_option("trace", trace_path, "trace JSON file")->required();

    try {
        app.parse(argc, argv);

        if (c_sharpen->parsed()) {
            const coxdef::ProblemInstance inst = load_with(o_sharpen);
            const coxdef::SharpeningTrace trace = coxdef::sharpen(inst);
            emit(o_sharpen, coxdef::trace_to_json(trace, inst));
        } else if (c_noh3->parsed()) {
            const coxdef::ProblemInstance inst = load_with(o_noh3);
            const coxdef::SharpeningTrace trace = coxdef::sharpen_no_h3(inst);
            emit(o_noh3, coxdef::trace_to_json(trace, inst));
        } else if (c_analyze->parsed()) {
            const coxdef::ProblemInstance inst = load_with(o_analyze);
            emit(o_analyze, coxdef::analyze_to_json(coxdef::analyze(inst)));
        } else if (c_oracle->parsed()) {
            const coxdef::ProblemInstance inst = load_with(o_oracle);
            emit(o_oracle, coxdef::oracle_to_json(coxdef::oracle(inst)));
        } else if (c_verify->parsed()) {
            const coxdef::ProblemInstance inst = load_with(o_verify);
            const coxdef::ReplayReport rep =
                coxdef::verify_trace(inst, read_file(trace_path));
            nlohmann::ordered_json out;
            out["ok"] = rep.ok;
            out["steps"] = rep.steps;
            out["problems"] = rep.problems;
            emit(o_verify, out.dump(2));
            if (!rep.ok) return 4;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const coxdef::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const coxdef::NotAReflection& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const coxdef::FieldTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const coxdef::GroupTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const coxdef::CapTooSmall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const coxdef::CoxdefError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
