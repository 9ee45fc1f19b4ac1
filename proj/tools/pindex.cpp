// pindex: personal citation metrics from partitioned author credit.
//
//   pindex compute   --input records.csv [--policy policy.json] [--format table|json|csv]
//   pindex partition --authors M [--x X] [--s S] [--policy policy.json] [--format ...]
//   pindex plot      --authors M [--s S] [--samples N] [--envelope] --out file.{csv,svg}
//   pindex compare   --input records.csv [--policy policy.json] [--format table|json]
//
// Exit codes: 0 success, 1 input error, 2 undefined metric (no articles).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pindex/basis.hpp"
#include "pindex/ingest.hpp"
#include "pindex/metrics.hpp"
#include "pindex/partition.hpp"
#include "pindex/render.hpp"

namespace {

constexpr int exit_input_error = 1;
constexpr int exit_undefined_metric = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

pindex::PartitionPolicy load_policy(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("PINDEX_POLICY"); env != nullptr) path = env;
    }
    if (path.empty()) return pindex::default_schedule(7);
    try {
        return pindex::parse_policy(read_file(path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError("policy " + path + ": " + e.what());
    }
}

std::vector<pindex::ArticleRecord> load_records(const std::string& path) {
    const auto format = std::filesystem::path(path).extension() == ".json"
                            ? pindex::RecordFormat::json
                            : pindex::RecordFormat::csv;
    const auto text = read_file(path);
    try {
        return pindex::parse_records(text, format);
    } catch (const pindex::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

pindex::OutputFormat parse_format(const std::string& name) {
    if (name.empty()) return pindex::OutputFormat::table;
    auto format = pindex::output_format_from_name(name);
    if (!format) throw InputError("unknown format '" + name + "'");
    return *format;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) throw InputError("cannot write '" + out_path + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"P-Index author metrics with Bernstein partitioning of citation credit"};
    app.require_subcommand(1);

    std::string input;
    std::string policy_path;
    std::string format_name;
    std::string out_path;
    unsigned authors = 0;
    std::optional<double> x;
    std::optional<double> s;
    std::size_t samples = 201;
    bool with_envelope = false;

    auto* compute = app.add_subcommand("compute", "Compute C, Q, P, C_false and H for one author");
    compute->add_option("--input", input, "Citation records (.csv or .json)")->required();
    compute->add_option("--policy", policy_path, "Partition policy JSON (default: $PINDEX_POLICY)");
    compute->add_option("--format", format_name, "table (default), json or csv");
    compute->add_option("--out", out_path, "Write to file instead of stdout");

    auto* partition = app.add_subcommand("partition", "Print the p-sequence for an author count");
    partition->add_option("--authors", authors, "Number of authors")->required()->check(CLI::PositiveNumber);
    partition->add_option("--x", x, "p-axis position");
    partition->add_option("--s", s, "Stretching parameter of the Bernstein-S basis");
    partition->add_option("--policy", policy_path, "Partition policy JSON");
    partition->add_option("--format", format_name, "table (default), json or csv");
    partition->add_option("--out", out_path, "Write to file instead of stdout");

    auto* plot = app.add_subcommand("plot", "Sample the basis polynomials for plotting");
    plot->add_option("--authors", authors, "Number of authors")->required()->check(CLI::PositiveNumber);
    plot->add_option("--s", s, "Domain end / stretching parameter");
    plot->add_option("--samples", samples, "Number of abscissas")->check(CLI::Range(2, 1000000));
    plot->add_flag("--envelope", with_envelope, "Include the envelope curve");
    plot->add_option("--policy", policy_path, "Partition policy JSON (supplies s)");
    plot->add_option("--format", format_name, "csv or svg (default: from --out extension)");
    plot->add_option("--out", out_path, "Output file")->required();

    auto* compare = app.add_subcommand("compare", "Partitioned versus conventional metrics");
    compare->add_option("--input", input, "Citation records (.csv or .json)")->required();
    compare->add_option("--policy", policy_path, "Partition policy JSON");
    compare->add_option("--format", format_name, "table (default) or json");
    compare->add_option("--out", out_path, "Write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    }

    try {
        if (compute->parsed() || compare->parsed()) {
            const auto policy = load_policy(policy_path);
            const auto records = load_records(input);
            const auto format = parse_format(format_name);
            const auto report = pindex::build_report(records, policy);
            if (compute->parsed()) {
                if (format == pindex::OutputFormat::svg) throw InputError("svg is only valid for plot");
                emit(pindex::render_report(report, format), out_path);
            } else {
                if (format != pindex::OutputFormat::table && format != pindex::OutputFormat::json) {
                    throw InputError("compare supports table or json");
                }
                emit(pindex::render_comparison(report, format), out_path);
            }
        } else if (partition->parsed()) {
            const auto policy = load_policy(policy_path);
            const auto format = parse_format(format_name);
            if (format == pindex::OutputFormat::svg) throw InputError("svg is only valid for plot");
            pindex::PSequence seq;
            if (x || s) {
                const double stretch = s.value_or(policy.effective_s());
                const auto axis = x ? x : policy.resolve_x(authors);
                if (!axis) throw InputError("no --x given and the policy has no entry for this author count");
                seq = pindex::make_psequence(authors, *axis, stretch);
            } else {
                seq = pindex::make_psequence(authors, policy);
            }
            const auto groups = pindex::shared_rank_groups(seq, 1e-4);
            emit(pindex::render_psequence(seq, groups, format), out_path);
        } else if (plot->parsed()) {
            const double stretch = s ? *s : load_policy(policy_path).effective_s();
            pindex::OutputFormat format = pindex::OutputFormat::csv;
            if (!format_name.empty()) {
                format = parse_format(format_name);
            } else if (std::filesystem::path(out_path).extension() == ".svg") {
                format = pindex::OutputFormat::svg;
            }
            if (format != pindex::OutputFormat::csv && format != pindex::OutputFormat::svg) {
                throw InputError("plot supports csv or svg");
            }
            const auto curve = pindex::sample_curves(authors - 1, stretch, samples, with_envelope);
            emit(format == pindex::OutputFormat::svg ? pindex::render_curves_svg(curve)
                                                     : pindex::render_curves_csv(curve),
                 out_path);
        }
    } catch (const pindex::undefined_metric_error& e) {
        std::cerr << "pindex: " << e.what() << '\n';
        return exit_undefined_metric;
    } catch (const std::exception& e) {
        std::cerr << "pindex: error: " << e.what() << '\n';
        return exit_input_error;
    }
    return 0;
}
