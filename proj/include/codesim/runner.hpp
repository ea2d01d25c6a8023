#pragma once

// Experiment orchestration: expands a grid spec into deterministic instances,
// builds prompts, fans completions out across a thread pool, logs every call
// as JSONL, and aggregates the metric reports.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "codesim/generators.hpp"
#include "codesim/http_provider.hpp"
#include "codesim/llm_client.hpp"
#include "codesim/prompts.hpp"
#include "codesim/scoring.hpp"

namespace codesim {

inline constexpr const char* k_harness_version = "1.0";

// One grid cell: a family with fixed parameters. runs/batch of 0 inherit the
// experiment-wide defaults.
struct CellSpec {
    FamilyParams params;
    int runs = 0;
    int batch = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["params"] = params.to_json();
        if (runs > 0) j["runs"] = runs;
        if (batch > 0) j["batch"] = batch;
        return j;
    }

    static CellSpec from_json(const nlohmann::json& j) {
        CellSpec c;
        c.params = FamilyParams::from_json(j.at("params"));
        c.runs = j.value("runs", 0);
        c.batch = j.value("batch", 0);
        return c;
    }
};

struct ExperimentSpec {
    std::string name = "experiment";
    std::vector<CellSpec> cells;
    std::vector<Technique> techniques = {Technique::cot()};
    std::vector<ModelConfig> models;
    int runs = 3;
    int batch = 30;
    std::uint64_t master_seed = 0;
    int parallelism = 4;
    CacheMode mode = CacheMode::Record;
    std::string cache_file;  // empty: <out_dir>/cache.jsonl

    int runs_for(const CellSpec& cell) const { return cell.runs > 0 ? cell.runs : runs; }
    int batch_for(const CellSpec& cell) const { return cell.batch > 0 ? cell.batch : batch; }

    void validate() const {
        if (runs < 1) throw ConfigError("runs must be >= 1");
        if (batch < 1) throw ConfigError("batch must be >= 1");
        if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
        if (cells.empty()) throw ConfigError("spec has no cells");
        if (techniques.empty()) throw ConfigError("spec has no techniques");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["runs"] = runs;
        j["batch"] = batch;
        j["master_seed"] = master_seed;
        j["parallelism"] = parallelism;
        j["mode"] = cache_mode_name(mode);
        if (!cache_file.empty()) j["cache_file"] = cache_file;
        nlohmann::json techs = nlohmann::json::array();
        for (const auto& t : techniques) techs.push_back(technique_name(t));
        j["techniques"] = std::move(techs);
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& m : models) ms.push_back(m.to_json());
        j["models"] = std::move(ms);
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : cells) cs.push_back(c.to_json());
        j["cells"] = std::move(cs);
        return j;
    }

    static ExperimentSpec from_json(const nlohmann::json& j) {
        ExperimentSpec s;
        s.name = j.value("name", std::string("experiment"));
        s.runs = j.value("runs", 3);
        s.batch = j.value("batch", 30);
        s.master_seed = j.value("master_seed", std::uint64_t{0});
        s.parallelism = j.value("parallelism", 4);
        s.mode = cache_mode_from_name(j.value("mode", std::string("record")));
        s.cache_file = j.value("cache_file", std::string());
        if (j.contains("techniques")) {
            s.techniques.clear();
            for (const auto& t : j.at("techniques"))
                s.techniques.push_back(technique_from_name(t.get<std::string>()));
        }
        for (const auto& m : j.value("models", nlohmann::json::array()))
            s.models.push_back(ModelConfig::from_json(m));
        for (const auto& c : j.value("cells", nlohmann::json::array()))
            s.cells.push_back(CellSpec::from_json(c));
        return s;
    }

    // Content hash of the canonical spec serialization (nlohmann objects
    // serialize with sorted keys, so the dump is stable).
    std::string spec_hash() const {
        HashWriter w;
        w.add("experiment_spec").add(to_json().dump());
        return hex64(w.value());
    }
};

// --- Deterministic instance derivation ----------------------------------------

inline std::uint64_t instance_seed(std::uint64_t master_seed, const FamilyParams& params,
                                   int run_index, int item_index) {
    HashWriter w;
    w.add("instance_seed")
        .add_u64(master_seed)
        .add(params.canonical())
        .add_i64(run_index)
        .add_i64(item_index);
    return w.value();
}

namespace detail {

inline const VariantPairIds& pair_of_member(const std::string& member) {
    for (const auto& pair : variant_pairs())
        if (pair.classic_id == member || pair.variant_id == member) return pair;
    throw UnknownFamily("no classic/variant pair has a member named '" + member + "'");
}

// Input distribution per variant member, sized so every function terminates
// quickly and produces values a reader could check by hand.
inline Value sample_variant_input(const std::string& member, Rng& rng) {
    if (member == "bubble_asc" || member == "bubble_desc") {
        std::vector<BigInt> xs;
        for (int i = 0; i < 10; ++i) xs.emplace_back(rng.uniform(0, 100));
        return Value::list(std::move(xs));
    }
    if (member == "fibonacci" || member == "padovan") return Value::integer(rng.uniform(5, 15));
    if (member == "gauss" || member == "gauss_alt") return Value::integer(rng.uniform(5, 50));
    if (member == "is_prime" || member == "is_prime_succ")
        return Value::integer(rng.uniform(10, 100));
    if (member == "collatz_sum" || member == "collatz_even_sum")
        return Value::integer(rng.uniform(3, 12));
    throw UnknownFamily("no input distribution for variant member '" + member + "'");
}

}  // namespace detail

// Routes a parameter record to its family generator.
inline BenchmarkInstance generate_instance(const FamilyParams& p, std::uint64_t seed) {
    switch (p.family) {
    case Family::SingleClass:
        if (p.instruction_classes.size() != 1)
            throw ConfigError("single-class cells take exactly one instruction class");
        return gen_single_class(p.instruction_classes.front(), p.n_lines, seed);
    case Family::StraightLine: return gen_straight_line(p.n_lines, seed);
    case Family::CriticalPath: return gen_critical_path(p.n_lines, p.path_len, seed);
    case Family::Approximate: return gen_approximate(p.k, seed);
    case Family::Redundant: return gen_redundant(seed, p.m);
    case Family::NestedLoops: return gen_nested(p.k, seed, p.enforce_bound);
    case Family::Sorting: return gen_sorting(p.algorithm, p.style, p.input_len, seed);
    case Family::VariantPair: {
        const VariantPairIds& pair = detail::pair_of_member(p.algorithm);
        // Key the input draw on the pair, not the member, so a classic and its
        // variant are always evaluated on identical inputs.
        HashWriter w;
        w.add("variant_input").add(pair.pair_name).add_u64(seed);
        Rng rng(w.value());
        const Value input = detail::sample_variant_input(p.algorithm, rng);
        auto members = gen_variant_pair(pair.pair_name, input, p.anonymize, seed);
        return p.algorithm == pair.classic_id ? std::move(members.first)
                                              : std::move(members.second);
    }
    case Family::GoodExchange: return gen_good_exchange(p.n_lines, p.mode, seed);
    }
    throw UnknownFamily("unhandled family enum value");
}

// Rejection-sampling generators can exhaust their budget on unlucky seeds;
// reseed deterministically so the instance set stays a pure function of the
// grid coordinates.
inline BenchmarkInstance generate_instance_with_retry(const FamilyParams& p, std::uint64_t seed,
                                                      int max_tries = 64) {
    std::uint64_t s = seed;
    for (int attempt = 0;; ++attempt) {
        try {
            return generate_instance(p, s);
        } catch (const GenerationExhausted&) {
            if (attempt + 1 >= max_tries) throw;
            HashWriter w;
            w.add("reseed").add_u64(seed).add_i64(attempt);
            s = w.value();
        }
    }
}

struct PlannedInstance {
    std::size_t cell_index = 0;
    int run_index = 0;
    int item_index = 0;
    std::uint64_t seed = 0;
    BenchmarkInstance instance;
};

// Expands every cell into its runs x batch instances, deterministically.
inline std::vector<PlannedInstance> expand_grid(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<PlannedInstance> out;
    for (std::size_t c = 0; c < spec.cells.size(); ++c) {
        const CellSpec& cell = spec.cells[c];
        const int runs = spec.runs_for(cell);
        const int batch = spec.batch_for(cell);
        if (runs < 1 || batch < 1) throw ConfigError("cell overrides must be >= 1");
        for (int r = 0; r < runs; ++r) {
            for (int i = 0; i < batch; ++i) {
                PlannedInstance planned;
                planned.cell_index = c;
                planned.run_index = r;
                planned.item_index = i;
                planned.seed = instance_seed(spec.master_seed, cell.params, r, i);
                planned.instance = generate_instance_with_retry(cell.params, planned.seed);
                out.push_back(std::move(planned));
            }
        }
    }
    return out;
}

// --- Built-in experiment grids -------------------------------------------------

// The full replication grid: per-class straight lines, mixed straight lines,
// critical paths, approximate loops, redundancy, nested loops, the 16 sorting
// templates, the good-exchange pair of renderings, and the anonymized
// classic/variant functions at 50 simulations each.
inline ExperimentSpec paper_replication_spec() {
    ExperimentSpec spec;
    spec.name = "paper-replication";
    spec.runs = 3;
    spec.batch = 30;
    spec.techniques = {Technique::cot()};

    ModelConfig model;
    model.provider_id = "mock:oracle";
    model.model_name = "mock-oracle";
    spec.models.push_back(model);

    auto add = [&spec](FamilyParams p, int runs = 0, int batch = 0) {
        CellSpec cell;
        cell.params = std::move(p);
        cell.runs = runs;
        cell.batch = batch;
        spec.cells.push_back(std::move(cell));
    };

    for (InstructionClass cls :
         {InstructionClass::AddSub, InstructionClass::Mov, InstructionClass::AndOr}) {
        for (int n : {10, 20, 30}) {
            FamilyParams p;
            p.family = Family::SingleClass;
            p.instruction_classes = {cls};
            p.n_lines = n;
            add(std::move(p));
        }
    }
    for (int n : {10, 20, 30, 40, 50}) {
        FamilyParams p;
        p.family = Family::StraightLine;
        p.n_lines = n;
        add(std::move(p));
    }
    for (int n : {20, 30}) {
        for (int path : {5, 10, 15, 20}) {
            FamilyParams p;
            p.family = Family::CriticalPath;
            p.n_lines = n;
            p.path_len = path;
            add(std::move(p));
        }
    }
    for (int k = 1; k <= 9; ++k) {
        FamilyParams p;
        p.family = Family::Approximate;
        p.k = k;
        add(std::move(p));
    }
    for (int m = 2; m <= 9; ++m) {
        FamilyParams p;
        p.family = Family::Redundant;
        p.m = m;
        p.n_lines = 10;
        add(std::move(p));
    }
    for (int k = 1; k <= 9; ++k) {
        FamilyParams p;
        p.family = Family::NestedLoops;
        p.k = k;
        add(std::move(p));
    }
    for (const char* algorithm :
         {"insertion", "bubble", "selection", "adaptive_bubble", "quick", "merge", "tim",
          "heap"}) {
        for (SortStyle style : {SortStyle::Recursive, SortStyle::Iterative}) {
            for (int len : {10, 20, 30, 40}) {
                FamilyParams p;
                p.family = Family::Sorting;
                p.algorithm = algorithm;
                p.style = style;
                p.input_len = len;
                add(std::move(p));
            }
        }
    }
    for (ExchangeMode mode : {ExchangeMode::Naturalistic, ExchangeMode::Synthetic}) {
        for (int n : {10, 20, 30, 40, 50}) {
            FamilyParams p;
            p.family = Family::GoodExchange;
            p.mode = mode;
            p.n_lines = n;
            add(std::move(p));
        }
    }
    for (const auto& pair : variant_pairs()) {
        for (const auto& member : {pair.classic_id, pair.variant_id}) {
            FamilyParams p;
            p.family = Family::VariantPair;
            p.algorithm = std::string(member);
            p.anonymize = true;
            add(std::move(p), /*runs=*/1, /*batch=*/50);
        }
    }
    return spec;
}

// A fast grid exercising every family once; handy for smoke checks.
inline ExperimentSpec smoke_spec() {
    ExperimentSpec spec;
    spec.name = "smoke";
    spec.runs = 1;
    spec.batch = 3;
    spec.techniques = {Technique::cot()};
    ModelConfig model;
    model.provider_id = "mock:oracle";
    model.model_name = "mock-oracle";
    spec.models.push_back(model);

    auto add = [&spec](FamilyParams p, int runs = 0, int batch = 0) {
        CellSpec cell;
        cell.params = std::move(p);
        cell.runs = runs;
        cell.batch = batch;
        spec.cells.push_back(std::move(cell));
    };
    {
        FamilyParams p;
        p.family = Family::SingleClass;
        p.instruction_classes = {InstructionClass::AddSub};
        p.n_lines = 10;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::StraightLine;
        p.n_lines = 10;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::CriticalPath;
        p.n_lines = 20;
        p.path_len = 5;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::Approximate;
        p.k = 3;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::Redundant;
        p.m = 3;
        p.n_lines = 10;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::NestedLoops;
        p.k = 2;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::Sorting;
        p.algorithm = "merge";
        p.style = SortStyle::Iterative;
        p.input_len = 10;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::GoodExchange;
        p.mode = ExchangeMode::Synthetic;
        p.n_lines = 10;
        add(std::move(p));
    }
    {
        FamilyParams p;
        p.family = Family::VariantPair;
        p.algorithm = "fibonacci";
        p.anonymize = true;
        add(std::move(p), 1, 3);
    }
    return spec;
}

inline ExperimentSpec builtin_spec(const std::string& name) {
    if (name == "paper-replication") return paper_replication_spec();
    if (name == "smoke") return smoke_spec();
    throw ConfigError("unknown built-in spec: " + name);
}

// --- Run logs -------------------------------------------------------------------

// One completion call. Self-consistency emits one row per vote; grouping by
// (model, technique, cell, run, item) recovers the vote set.
struct LogRow {
    std::string spec_hash;
    std::string model;
    std::string technique;
    std::string family;
    std::string cell;  // FamilyParams::file_tag of the cell
    int run_index = 0;
    int item_index = 0;
    int vote_index = 0;
    std::string instance_id;
    std::string contract;
    std::string request_hash;
    std::string prompt_text;
    std::string response_text;
    std::string provenance;
    std::int64_t prompt_tokens = 0;
    std::int64_t output_tokens = 0;
    bool tokens_estimated = false;
    double latency_ms = 0.0;
    std::int64_t timestamp = 0;
    ExtractedAnswer answer;
    bool correct = false;
    Value truth;
    std::string error;  // nonempty when the call failed

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["spec_hash"] = spec_hash;
        j["model"] = model;
        j["technique"] = technique;
        j["family"] = family;
        j["cell"] = cell;
        j["run_index"] = run_index;
        j["item_index"] = item_index;
        j["vote_index"] = vote_index;
        j["instance_id"] = instance_id;
        j["contract"] = contract;
        j["request_hash"] = request_hash;
        j["prompt_text"] = prompt_text;
        j["response_text"] = response_text;
        j["provenance"] = provenance;
        j["prompt_tokens"] = prompt_tokens;
        j["output_tokens"] = output_tokens;
        j["tokens_estimated"] = tokens_estimated;
        j["latency_ms"] = latency_ms;
        j["timestamp"] = timestamp;
        j["answer"] = extracted_to_json(answer);
        j["correct"] = correct;
        j["truth"] = truth.to_json();
        j["error"] = error;
        return j;
    }

    static LogRow from_json(const nlohmann::json& j) {
        LogRow r;
        r.spec_hash = j.at("spec_hash").get<std::string>();
        r.model = j.at("model").get<std::string>();
        r.technique = j.at("technique").get<std::string>();
        r.family = j.at("family").get<std::string>();
        r.cell = j.at("cell").get<std::string>();
        r.run_index = j.at("run_index").get<int>();
        r.item_index = j.at("item_index").get<int>();
        r.vote_index = j.at("vote_index").get<int>();
        r.instance_id = j.at("instance_id").get<std::string>();
        r.contract = j.at("contract").get<std::string>();
        r.request_hash = j.at("request_hash").get<std::string>();
        r.prompt_text = j.at("prompt_text").get<std::string>();
        r.response_text = j.at("response_text").get<std::string>();
        r.provenance = j.at("provenance").get<std::string>();
        r.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
        r.output_tokens = j.at("output_tokens").get<std::int64_t>();
        r.tokens_estimated = j.at("tokens_estimated").get<bool>();
        r.latency_ms = j.at("latency_ms").get<double>();
        r.timestamp = j.at("timestamp").get<std::int64_t>();
        r.answer = extracted_from_json(j.at("answer"));
        r.correct = j.at("correct").get<bool>();
        r.truth = Value::from_json(j.at("truth"));
        r.error = j.at("error").get<std::string>();
        return r;
    }
};

namespace detail {

inline std::string sanitize_component(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' ||
                        c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out.empty() ? std::string("_") : out;
}

// Serialized append-only writers, one per log file.
class LogSink {
  public:
    void append(const std::filesystem::path& file, const nlohmann::json& row) {
        std::lock_guard<std::mutex> lock(mu_);
        std::filesystem::create_directories(file.parent_path());
        std::ofstream out(file, std::ios::app);
        if (!out) throw ConfigError("cannot open log file: " + file.string());
        out << row.dump() << "\n";
    }

  private:
    std::mutex mu_;
};

inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            if (abort.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                abort.store(true);
                return;
            }
        }
    };
    const int workers = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int i = 0; i < workers - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// --- Reports ---------------------------------------------------------------------

struct FigureRow {
    std::string family;
    std::string cell;
    std::string model;
    std::string technique;
    std::vector<std::optional<double>> run_accuracy;
    double mean_accuracy = 0.0;
    std::optional<double> mae;
    std::optional<double> tuple_similarity;
    std::optional<double> delta;
    std::int64_t output_tokens = 0;  // cumulative over the cell
};

struct RunOutcome {
    std::string spec_hash;
    std::size_t planned_calls = 0;
    std::size_t failed_calls = 0;
    std::vector<std::string> skipped;  // technique x cell combinations that cannot be built
    std::vector<ReportRow> summary;
    std::vector<FigureRow> figures;
    std::filesystem::path logs_dir;
    std::filesystem::path reports_dir;
};

namespace detail {

struct CellKey {
    std::string model;
    std::string technique;
    std::string family;
    std::string cell;

    bool operator<(const CellKey& o) const {
        return std::tie(model, technique, family, cell) <
               std::tie(o.model, o.technique, o.family, o.cell);
    }
};

// Folds per-call rows into per-item scored answers (majority-voting the
// self-consistency vote groups), then into per-cell reports.
inline void aggregate_rows(const std::vector<LogRow>& rows, std::vector<ReportRow>& summary,
                           std::vector<FigureRow>& figures) {
    std::map<CellKey, std::map<std::pair<int, int>, std::vector<const LogRow*>>> cells;
    for (const auto& row : rows)
        cells[{row.model, row.technique, row.family, row.cell}][{row.run_index, row.item_index}]
            .push_back(&row);

    for (auto& [key, items] : cells) {
        std::vector<ScoredItem> scored;
        std::map<int, std::pair<std::size_t, std::size_t>> per_run;  // run -> (correct, n)
        std::int64_t tokens = 0;
        for (auto& [coord, votes] : items) {
            std::sort(votes.begin(), votes.end(),
                      [](const LogRow* a, const LogRow* b) { return a->vote_index < b->vote_index; });
            ExtractedAnswer answer;
            bool tie_broken = false;
            if (votes.size() == 1) {
                answer = votes.front()->answer;
            } else {
                std::vector<ExtractedAnswer> ballot;
                for (const LogRow* v : votes) ballot.push_back(v->answer);
                VoteOutcome outcome = majority_vote(ballot);
                answer = outcome.answer;
                tie_broken = outcome.tie_broken;
            }
            ScoredItem item = score_item(answer, votes.front()->truth, tie_broken);
            auto& bucket = per_run[coord.first];
            bucket.second += 1;
            if (item.correct) bucket.first += 1;
            for (const LogRow* v : votes) tokens += v->output_tokens;
            scored.push_back(std::move(item));
        }
        ReportRow report{key.model, key.family, key.cell, key.technique, aggregate(scored)};

        FigureRow fig;
        fig.family = key.family;
        fig.cell = key.cell;
        fig.model = key.model;
        fig.technique = key.technique;
        const int max_run = per_run.empty() ? 0 : per_run.rbegin()->first + 1;
        fig.run_accuracy.assign(static_cast<std::size_t>(max_run), std::nullopt);
        for (const auto& [run, counts] : per_run)
            fig.run_accuracy[static_cast<std::size_t>(run)] =
                static_cast<double>(counts.first) / static_cast<double>(counts.second);
        fig.mean_accuracy = report.report.accuracy;
        fig.mae = report.report.mae;
        fig.tuple_similarity = report.report.tuple_similarity;
        fig.delta = report.report.delta;
        fig.output_tokens = tokens;

        summary.push_back(std::move(report));
        figures.push_back(std::move(fig));
    }
}

inline std::string figure_csv(const std::vector<FigureRow>& rows, std::size_t max_runs) {
    std::string out = "family,cell,model,technique";
    for (std::size_t r = 0; r < max_runs; ++r) out += ",run" + std::to_string(r) + "_accuracy";
    out += ",mean_accuracy,mae,tuple_similarity,delta,output_tokens\n";
    for (const auto& row : rows) {
        out += row.family + "," + row.cell + "," + row.model + "," + row.technique;
        for (std::size_t r = 0; r < max_runs; ++r) {
            out += ",";
            if (r < row.run_accuracy.size() && row.run_accuracy[r])
                out += format_fixed(*row.run_accuracy[r]);
        }
        out += "," + format_fixed(row.mean_accuracy);
        out += "," + format_optional(row.mae);
        out += "," + format_optional(row.tuple_similarity);
        out += "," + format_optional(row.delta);
        out += "," + std::to_string(row.output_tokens) + "\n";
    }
    return out;
}

}  // namespace detail

// Writes summary.csv plus one figure table per family into reports_dir.
inline void write_reports(const std::filesystem::path& reports_dir,
                          std::vector<ReportRow> summary, std::vector<FigureRow> figures) {
    std::filesystem::create_directories(reports_dir);
    auto order = [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.model, a.technique, a.family, a.params) <
               std::tie(b.model, b.technique, b.family, b.params);
    };
    std::sort(summary.begin(), summary.end(), order);
    {
        std::ofstream out(reports_dir / "summary.csv", std::ios::trunc);
        out << report_csv(summary);
    }
    std::sort(figures.begin(), figures.end(), [](const FigureRow& a, const FigureRow& b) {
        return std::tie(a.family, a.cell, a.model, a.technique) <
               std::tie(b.family, b.cell, b.model, b.technique);
    });
    std::set<std::string> families;
    for (const auto& f : figures) families.insert(f.family);
    for (const auto& family : families) {
        std::vector<FigureRow> rows;
        std::size_t max_runs = 0;
        for (const auto& f : figures)
            if (f.family == family) {
                max_runs = std::max(max_runs, f.run_accuracy.size());
                rows.push_back(f);
            }
        std::ofstream out(reports_dir / ("figure_" + family + ".csv"), std::ios::trunc);
        out << detail::figure_csv(rows, max_runs);
    }
}

// --- Runner ------------------------------------------------------------------------

class Runner {
  public:
    using ProviderFactory =
        std::function<std::shared_ptr<Provider>(const ModelConfig&, const GroundTruthResolver&)>;

    Runner(ExperimentSpec spec, std::filesystem::path out_dir)
        : spec_(std::move(spec)), out_dir_(std::move(out_dir)) {}

    // Tests substitute custom providers (vote-dependent mocks, counters).
    void set_provider_factory(ProviderFactory factory) { factory_ = std::move(factory); }

    const ExperimentSpec& spec() const { return spec_; }

    std::vector<PlannedInstance> plan() const { return expand_grid(spec_); }

    // Generates the instance set and writes the manifest plus sources.
    std::filesystem::path generate() {
        auto planned = plan();
        std::vector<BenchmarkInstance> instances;
        instances.reserve(planned.size());
        for (auto& p : planned) instances.push_back(std::move(p.instance));
        std::filesystem::create_directories(out_dir_);
        return write_manifest(instances, out_dir_);
    }

    RunOutcome run() {
        spec_.validate();
        if (spec_.models.empty()) throw ConfigError("spec has no models");
        const std::string spec_hash = spec_.spec_hash();

        const std::vector<PlannedInstance> planned = plan();
        auto truths = std::make_shared<std::map<std::string, Value>>();
        for (const auto& p : planned) (*truths)[p.instance.id] = p.instance.ground_truth;
        GroundTruthResolver resolver = [truths](const std::string& id) -> std::optional<Value> {
            auto it = truths->find(id);
            if (it == truths->end()) return std::nullopt;
            return it->second;
        };

        std::filesystem::create_directories(out_dir_);
        const std::filesystem::path cache_path =
            spec_.cache_file.empty() ? out_dir_ / "cache.jsonl"
                                     : std::filesystem::path(spec_.cache_file);
        auto cache = std::make_shared<CompletionCache>(cache_path);

        RunOutcome outcome;
        outcome.spec_hash = spec_hash;
        outcome.logs_dir = out_dir_ / "logs";
        outcome.reports_dir = out_dir_ / "reports";

        // One task per completion call.
        struct Task {
            const PlannedInstance* planned;
            const ModelConfig* model;
            std::shared_ptr<Client> client;
            PromptBundle bundle;
            std::string technique;
        };
        std::vector<Task> tasks;
        std::set<std::string> skipped;

        std::vector<std::shared_ptr<Client>> clients;
        for (const auto& model : spec_.models) {
            std::shared_ptr<Provider> provider =
                factory_ ? factory_(model, resolver) : default_provider(model, resolver);
            clients.push_back(std::make_shared<Client>(provider, cache, spec_.mode));
        }

        for (std::size_t m = 0; m < spec_.models.size(); ++m) {
            for (const Technique& technique : spec_.techniques) {
                const std::string tech_name = technique_name(technique);
                for (const auto& p : planned) {
                    std::vector<PromptBundle> bundles;
                    try {
                        bundles = build(p.instance, technique);
                    } catch (const UnsupportedCombination&) {
                        skipped.insert(tech_name + " x " + p.instance.params.file_tag());
                        continue;
                    }
                    for (auto& bundle : bundles)
                        tasks.push_back(Task{&p, &spec_.models[m], clients[m], std::move(bundle),
                                             tech_name});
                }
            }
        }
        outcome.planned_calls = tasks.size();
        outcome.skipped.assign(skipped.begin(), skipped.end());

        std::vector<LogRow> rows(tasks.size());
        detail::LogSink sink;
        std::atomic<std::size_t> failed{0};
        detail::parallel_for(tasks.size(), spec_.parallelism, [&](std::size_t i) {
            const Task& task = tasks[i];
            LogRow row;
            row.spec_hash = spec_hash;
            row.model = task.model->model_name;
            row.technique = task.technique;
            row.family = std::string(family_name(task.planned->instance.family));
            row.cell = task.planned->instance.params.file_tag();
            row.run_index = task.planned->run_index;
            row.item_index = task.planned->item_index;
            row.vote_index = task.bundle.vote_index;
            row.instance_id = task.planned->instance.id;
            row.contract = contract_name(task.bundle.contract);
            row.truth = task.planned->instance.ground_truth;
            try {
                CompletionRecord rec = task.client->complete(*task.model, task.bundle);
                row.request_hash = rec.request_hash;
                row.prompt_text = rec.prompt_text;
                row.response_text = rec.response_text;
                row.provenance = rec.provenance;
                row.prompt_tokens = rec.prompt_tokens;
                row.output_tokens = rec.output_tokens;
                row.tokens_estimated = rec.tokens_estimated;
                row.latency_ms = rec.latency_ms;
                row.timestamp = rec.timestamp;
                row.answer = extract(rec.response_text, task.bundle.contract);
                row.correct = row.answer.value && *row.answer.value == row.truth;
            } catch (const CacheMiss&) {
                throw;  // replay with a cold cache fails fast
            } catch (const AuthError&) {
                throw;  // missing credentials abort the run
            } catch (const ConfigError&) {
                throw;
            } catch (const ClientError& e) {
                row.error = e.what();
                failed.fetch_add(1);
            }
            const std::filesystem::path file = outcome.logs_dir /
                                               detail::sanitize_component(row.model) /
                                               detail::sanitize_component(row.family) /
                                               (detail::sanitize_component(row.cell) + ".jsonl");
            sink.append(file, row.to_json());
            rows[i] = std::move(row);
        });
        outcome.failed_calls = failed.load();

        detail::aggregate_rows(rows, outcome.summary, outcome.figures);
        write_reports(outcome.reports_dir, outcome.summary, outcome.figures);
        write_manifest_row(outcome);
        return outcome;
    }

  private:
    static std::shared_ptr<Provider> default_provider(const ModelConfig& model,
                                                      const GroundTruthResolver& resolver) {
        if (model.provider_id.rfind("mock:", 0) == 0)
            return std::shared_ptr<Provider>(mock_provider(model.provider_id, resolver));
        if (model.provider_id == "http-chat" || model.provider_id.empty())
            return std::make_shared<HttpChatProvider>();
        throw ConfigError("unknown provider: " + model.provider_id);
    }

    void write_manifest_row(const RunOutcome& outcome) const {
        nlohmann::json j;
        j["spec_hash"] = outcome.spec_hash;
        j["harness_version"] = k_harness_version;
        j["spec"] = spec_.to_json();
        j["planned_calls"] = outcome.planned_calls;
        j["failed_calls"] = outcome.failed_calls;
        j["skipped"] = outcome.skipped;
        std::ofstream out(out_dir_ / "run_manifest.json", std::ios::trunc);
        out << j.dump(2) << "\n";
    }

    ExperimentSpec spec_;
    std::filesystem::path out_dir_;
    ProviderFactory factory_;
};

// --- Re-scoring and reporting from logs ---------------------------------------------

inline std::vector<LogRow> read_logs(const std::filesystem::path& logs_dir) {
    std::vector<LogRow> rows;
    if (!std::filesystem::exists(logs_dir))
        throw MissingLogs("no logs directory at " + logs_dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(logs_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            rows.push_back(LogRow::from_json(nlohmann::json::parse(line)));
        }
    }
    if (rows.empty()) throw MissingLogs("no log rows under " + logs_dir.string());
    return rows;
}

// Re-runs extraction and correctness on persisted responses, then rebuilds
// the reports. Failed calls keep their failed extraction.
inline RunOutcome rescore_logs(const std::filesystem::path& logs_dir,
                               const std::filesystem::path& reports_dir,
                               bool re_extract = true) {
    std::vector<LogRow> rows = read_logs(logs_dir);
    for (auto& row : rows) {
        if (re_extract && row.error.empty()) {
            row.answer = extract(row.response_text, contract_from_name(row.contract));
            row.correct = row.answer.value && *row.answer.value == row.truth;
        }
    }
    RunOutcome outcome;
    if (!rows.empty()) outcome.spec_hash = rows.front().spec_hash;
    outcome.logs_dir = logs_dir;
    outcome.reports_dir = reports_dir;
    detail::aggregate_rows(rows, outcome.summary, outcome.figures);
    write_reports(reports_dir, outcome.summary, outcome.figures);
    return outcome;
}

}  // namespace codesim
