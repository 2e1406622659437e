#include "delchan/io.hpp"

#include <fstream>
#include <sstream>

#include "delchan/errors.hpp"

namespace delchan {

namespace {

Alphabet alphabet_from_params(const Json& params) {
    Alphabet alphabet;
    if (params.contains("alphabet")) alphabet.symbols = params.at("alphabet").get<std::string>();
    if (params.contains("zero_index"))
        alphabet.zero_index = params.at("zero_index").get<std::size_t>();
    alphabet.validate();
    return alphabet;
}

}  // namespace

Json code_to_json(const Code& code) {
    Json params = Json::object();
    if (code.alphabet.symbols != "01") params["alphabet"] = code.alphabet.symbols;
    if (code.alphabet.zero_index != 0) params["zero_index"] = code.alphabet.zero_index;
    if (code.kind == CodeKind::repetition) params["factor"] = code.repetition_factor;
    if (code.kind == CodeKind::random_uniform) {
        params["length"] = code.length;
        params["seed"] = code.seed;
    }
    return Json{{"kind", code_kind_name(code.kind)}, {"n", code.n}, {"params", params}};
}

Code code_from_json(const Json& j) {
    Code code;
    code.kind = code_kind_from_name(j.at("kind").get<std::string>());
    code.n = j.at("n").get<std::size_t>();
    Json params = j.value("params", Json::object());
    code.alphabet = alphabet_from_params(params);
    if (code.kind == CodeKind::repetition)
        code.repetition_factor = params.at("factor").get<std::size_t>();
    if (code.kind == CodeKind::random_uniform) {
        code.length = params.at("length").get<std::size_t>();
        code.seed = params.value("seed", std::uint64_t(0));
    }
    code.validate();
    return code;
}

Json pattern_to_json(const Pattern& pattern) {
    if (const auto* layered = std::get_if<LayeredPattern>(&pattern))
        return Json{{"kind", "layered"},
                    {"kappa", layered->kappa},
                    {"f_del", layered->max_fraction}};
    const auto& pp = std::get<PrefixPeriodicPattern>(pattern);
    return Json{{"kind", "prefix_periodic"}, {"eps", pp.eps}};
}

Pattern pattern_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "layered") {
        LayeredPattern pattern;
        pattern.kappa = j.at("kappa").get<std::size_t>();
        pattern.max_fraction = j.at("f_del").get<std::vector<double>>();
        pattern.validate();
        return pattern;
    }
    if (kind == "prefix_periodic") {
        PrefixPeriodicPattern pattern{j.at("eps").get<double>()};
        pattern.validate();
        return pattern;
    }
    throw BadParams("unknown pattern kind \"" + kind + "\"");
}

Json channel_to_json(const Channel& channel) {
    if (const auto* layered = std::get_if<LayeredPattern>(&channel))
        return pattern_to_json(Pattern{*layered});
    if (const auto* pp = std::get_if<PrefixPeriodicPattern>(&channel))
        return pattern_to_json(Pattern{*pp});
    return Json{{"kind", "substitution"},
                {"rate", std::get<SubstitutionNoise>(channel).rate}};
}

Channel channel_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "substitution") return SubstitutionNoise{j.at("rate").get<double>()};
    Pattern pattern = pattern_from_json(j);
    if (const auto* layered = std::get_if<LayeredPattern>(&pattern)) return *layered;
    return std::get<PrefixPeriodicPattern>(pattern);
}

Json instance_to_json(const PatternInstance& instance) {
    Json marks = Json::array();
    for (const Mark& m : instance.marks)
        marks.push_back(Json{{"layer", m.layer}, {"chunk", m.chunk}, {"count", m.count}});
    return Json{{"length", instance.length}, {"marks", marks}, {"deleted", instance.deleted}};
}

Json dist_to_json(const OutputDist& dist) {
    Json out = Json::object();
    for (const auto& [b, p] : dist.probs) out[b] = p;
    out["ERR"] = dist.err;
    return out;
}

Json approx_report_to_json(const ApproxReport& report) {
    Json per_b = Json::object();
    for (const auto& [b, v] : report.per_b) per_b[b] = v;
    return Json{{"gap", report.gap},
                {"sum_ok", report.sum_ok},
                {"per_b", per_b},
                {"err_a", report.err_a},
                {"err_b", report.err_b}};
}

Json adversary_params_to_json(const AdversaryParams& p) {
    return Json{{"kappa", p.kappa},
                {"depth", p.depth},
                {"max_queries", p.max_queries},
                {"preliminary_fraction", p.preliminary_fraction},
                {"significant_fraction", p.significant_fraction},
                {"final_fraction", p.final_fraction},
                {"zero_depth", p.zero_depth},
                {"preliminary_depth", p.preliminary_depth},
                {"small_cap", p.small_cap},
                {"grid", p.grid},
                {"window", p.window},
                {"rho", p.rho},
                {"budget", p.budget},
                {"stride_exponent", p.stride_exponent},
                {"sweep_begin", p.sweep_begin},
                {"sweep_end", p.sweep_end},
                {"family_cap", p.family_cap},
                {"significance_list_cap", p.significance_list_cap},
                {"q_cap", p.q_cap},
                {"image_cap", p.image_cap},
                {"mc_samples", p.mc_samples},
                {"seed", p.seed},
                {"max_joint_states", p.caps.max_joint_states}};
}

AdversaryParams adversary_params_from_json(const Json& j) {
    AdversaryParams p;
    p.kappa = j.value("kappa", p.kappa);
    p.depth = j.value("depth", p.depth);
    p.max_queries = j.value("max_queries", p.max_queries);
    p.preliminary_fraction = j.value("preliminary_fraction", p.preliminary_fraction);
    p.significant_fraction = j.value("significant_fraction", p.significant_fraction);
    p.final_fraction = j.value("final_fraction", p.final_fraction);
    p.zero_depth = j.value("zero_depth", p.zero_depth);
    p.preliminary_depth = j.value("preliminary_depth", p.preliminary_depth);
    p.small_cap = j.value("small_cap", p.small_cap);
    p.grid = j.value("grid", p.grid);
    p.window = j.value("window", p.window);
    p.rho = j.value("rho", p.rho);
    p.budget = j.value("budget", p.budget);
    p.stride_exponent = j.value("stride_exponent", p.stride_exponent);
    p.sweep_begin = j.value("sweep_begin", p.sweep_begin);
    p.sweep_end = j.value("sweep_end", p.sweep_end);
    p.family_cap = j.value("family_cap", p.family_cap);
    p.significance_list_cap = j.value("significance_list_cap", p.significance_list_cap);
    p.q_cap = j.value("q_cap", p.q_cap);
    p.image_cap = j.value("image_cap", p.image_cap);
    p.mc_samples = j.value("mc_samples", p.mc_samples);
    p.seed = j.value("seed", p.seed);
    p.caps.max_joint_states = j.value("max_joint_states", p.caps.max_joint_states);
    p.validate();
    return p;
}

Json rep_family_to_json(const RepFamily& rep) {
    Json families = Json::array();
    for (const auto& family : rep.families)
        for (const DiffList& list : family) families.push_back(list.diffs);
    Json queries = Json::array();
    for (const auto& q : rep.query_lists) queries.push_back(q);
    Json events = Json::array();
    for (const SignificanceEvent& e : rep.log.events)
        events.push_back(Json{{"layer", e.layer},
                              {"r", e.query_count},
                              {"b", e.b},
                              {"diffs", e.diffs.diffs},
                              {"difference", e.difference}});
    return Json{{"pattern", pattern_to_json(Pattern{rep.pattern})},
                {"F", families},
                {"G", rep.differences},
                {"Q", queries},
                {"params", adversary_params_to_json(rep.params)},
                {"log",
                 Json{{"events", events},
                      {"family_truncated", rep.log.family_truncated},
                      {"image_exhaustive", rep.log.image_exhaustive}}}};
}

RepFamily rep_family_from_json(const Json& j) {
    RepFamily rep;
    rep.params = adversary_params_from_json(j.at("params"));
    rep.families.assign(rep.params.max_queries + 1, {});
    for (const auto& diffs : j.at("F")) {
        DiffList list{diffs.get<std::vector<std::size_t>>()};
        std::size_t r = list.query_count();
        if (r > rep.families.size()) throw BadParams("family list longer than k+1 queries");
        rep.families[r - 1].push_back(std::move(list));
    }
    rep.differences = j.at("G").get<std::vector<std::size_t>>();
    for (const auto& q : j.at("Q"))
        rep.query_lists.push_back(q.get<std::vector<std::size_t>>());
    Pattern pattern = pattern_from_json(j.at("pattern"));
    rep.pattern = std::get<LayeredPattern>(pattern);
    if (j.contains("log")) {
        rep.log.family_truncated = j["log"].value("family_truncated", false);
        rep.log.image_exhaustive = j["log"].value("image_exhaustive", false);
    }
    return rep;
}

Json record_to_json(const CompressedRecord& record, const RepFamily& rep) {
    Json entries = Json::array();
    for (std::size_t i = 0; i < record.outputs.size(); ++i)
        entries.push_back(Json{{"queries", rep.query_lists[i]},
                               {"output", record.outputs[i] ? Json(*record.outputs[i])
                                                            : Json("ERR")}});
    return Json{{"entries", entries},
                {"kbar", record.kbar_symbols(rep.params.max_queries)},
                {"seed", record.seed}};
}

Json attack_report_to_json(const AttackReport& report) {
    Json cells = Json::array();
    for (const AttackCell& cell : report.cells)
        cells.push_back(
            Json{{"index", cell.index}, {"message", cell.message}, {"rate", cell.rate}});
    return Json{{"trials", report.trials},
                {"threshold", report.threshold},
                {"channel", report.channel},
                {"worst_index", report.worst_index},
                {"worst_message", report.worst_message},
                {"worst_rate", report.worst_rate},
                {"has_failing_index", report.has_failing_index},
                {"cells", cells}};
}

Json gap_distances_to_json(const GapDistances& report) {
    Json dists = Json::array();
    for (std::size_t i = 0; i < report.gaps.size(); ++i)
        dists.push_back(Json{{"gap", report.gaps[i]}, {"dist", dist_to_json(report.dists[i])}});
    Json pairs = Json::array();
    for (const auto& [a, b, tv] : report.pairwise_tv)
        pairs.push_back(Json{{"gap_a", report.gaps[a]}, {"gap_b", report.gaps[b]}, {"tv", tv}});
    return Json{{"n", report.n},
                {"eps", report.eps},
                {"anchor", report.anchor},
                {"samples", report.samples},
                {"distributions", dists},
                {"pairwise_tv", pairs}};
}

Json four_query_to_json(const FourQueryReport& report) {
    return Json{{"n", report.n},
                {"eps", report.eps},
                {"alpha", report.alpha},
                {"beta", report.beta},
                {"d_small", report.d_small},
                {"d_large", report.d_large},
                {"anchor", report.anchor},
                {"samples", report.samples},
                {"dist_small", dist_to_json(report.dist_small)},
                {"dist_large", dist_to_json(report.dist_large)},
                {"tv", report.tv}};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadParams("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadParams("cannot write " + path);
    out << contents;
}

Json read_json_file(const std::string& path) {
    return Json::parse(read_text_file(path));
}

}  // namespace delchan
