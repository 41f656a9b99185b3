#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using oeval::cli::CliConfig;
using oeval::cli::Command;
using oeval::cli::Format;
using oeval::cli::Level;

namespace {

void add_corpus(CLI::App* app, CliConfig& c) {
    app->add_option("--corpus", c.corpus, "Directory of review files (*.xml, *.json)");
}

void add_inputs(CLI::App* app, CliConfig& c) {
    add_corpus(app, c);
    app->add_option("--mapping", c.mapping, "Study/publication mapping CSV");
    app->add_option("--qrels", c.qrels, "Relevance judgments");
    app->add_option("--runs,--run", c.runs, "Run files")->expected(1, -1);
    app->add_option("--level", c.level, "Screening level of the qrels (recorded only)")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Level>{{"abstract", Level::Abstract},
                                                                         {"fulltext", Level::Fulltext}}));
}

void add_output(CLI::App* app, CliConfig& c, std::map<std::string, Format> formats) {
    app->add_option("--out", c.out, "Output directory")->capture_default_str();
    app->add_option("--format", c.format, "Output format")
        ->transform(CLI::CheckedTransformer(std::move(formats)));
}

void add_cutoffs(CLI::App* app, CliConfig& c) {
    app->add_option("--cutoffs", c.cutoffs, "Ranking cutoffs in percent")->delimiter(',')->capture_default_str();
    app->add_option("--ref-cutoff,--cutoff", c.reference_cutoff, "Cutoff used for orderings, Pareto and plots")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig config;
    CLI::App app{"Outcome-based evaluation of systematic review screening runs"};
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "Parse all inputs and print coverage diagnostics");
    add_inputs(validate, config);
    validate->add_option("--published-tol", config.published_tolerance,
                         "Relative tolerance when comparing published totals")
        ->capture_default_str();

    auto* eval = app.add_subcommand("eval-run", "Evaluate runs at ranking cutoffs");
    add_inputs(eval, config);
    add_cutoffs(eval, config);
    add_output(eval, config, {{"csv", Format::Csv}, {"json", Format::Json}, {"svg", Format::Svg}});
    eval->add_flag("!--no-baselines", config.baselines, "Skip the gold and max-with-qrels baselines");
    eval->add_option("--axis-clamp", config.axis_clamp, "Clamp plot axis at this value");

    auto* simulate = app.add_subcommand("simulate", "Random publication removal simulation");
    add_corpus(simulate, config);
    simulate->add_option("--mapping", config.mapping, "Study/publication mapping CSV");
    simulate->add_option("--removals", config.removals, "Publications removed per review")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--seeds", config.seeds, "Number of seeds")->capture_default_str();
    simulate->add_option("--base-seed", config.base_seed, "Base seed")->capture_default_str();
    simulate->add_option("--threads", config.threads, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_option("--axis-clamp", config.axis_clamp, "Clamp plot axis at this value");
    add_output(simulate, config, {{"csv", Format::Csv}, {"json", Format::Json}, {"svg", Format::Svg}});

    auto* pareto = app.add_subcommand("pareto", "Pareto frontier over non-estimable count and summed MoD");
    add_inputs(pareto, config);
    add_cutoffs(pareto, config);
    pareto->add_option("--points", config.points, "CSV of run_tag,x,y_raw instead of evaluating runs");
    pareto->add_option("--out", config.out, "Output directory")->capture_default_str();

    auto* report = app.add_subcommand("report", "Forest plots per outcome");
    add_inputs(report, config);
    add_cutoffs(report, config);
    report->add_option("--review", config.review, "Only this review");
    report->add_option("--out", config.out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : oeval::cli::kExitUsage;
    }

    if (validate->parsed()) config.command = Command::Validate;
    else if (eval->parsed()) config.command = Command::EvalRun;
    else if (simulate->parsed()) config.command = Command::Simulate;
    else if (pareto->parsed()) config.command = Command::Pareto;
    else config.command = Command::Report;
    return oeval::cli::run_command(config);
}
