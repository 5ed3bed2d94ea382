#ifndef JETSPACE_CLI_HPP
#define JETSPACE_CLI_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <jetspace/cohomology.hpp>
#include <jetspace/errors.hpp>
#include <jetspace/growth.hpp>
#include <jetspace/jet.hpp>
#include <jetspace/presented_module.hpp>
#include <jetspace/symbols.hpp>
#include <jetspace/twisted_do.hpp>
#include <jetspace/weyl.hpp>

namespace jetspace::cli
{

using json = nlohmann::json;

inline constexpr const char *schema_version = "jetspace-report/1";

enum class Command { dim_do, growth_table, cohomology, symbol, elliptic_check, jet, induced_map, block_op };
enum class Format { json, csv };

inline const std::map<std::string, Command> &command_names()
{
    static const std::map<std::string, Command> names{
        {"dim-do", Command::dim_do},       {"growth-table", Command::growth_table},
        {"cohomology", Command::cohomology}, {"symbol", Command::symbol},
        {"elliptic-check", Command::elliptic_check}, {"jet", Command::jet},
        {"induced-map", Command::induced_map}, {"block-op", Command::block_op},
    };
    return names;
}

inline std::string command_name(Command c)
{
    for (const auto &[k, v] : command_names()) {
        if (v == c) {
            return k;
        }
    }
    return "?";
}

struct ExperimentConfig {
    Command command = Command::dim_do;
    // Sorted key-value set; integers stay integers, operators stay strings.
    json parameters = json::object();
    std::optional<std::string> output;
    Format format = Format::json;
};

// Missing or ill-typed parameters: the config itself is malformed.
class usage_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail
{

inline std::int64_t int_param(const ExperimentConfig &c, const std::string &key)
{
    const auto it = c.parameters.find(key);
    if (it == c.parameters.end() || !it->is_number_integer()) {
        throw usage_error(command_name(c.command) + ": integer parameter --" + key + " is required");
    }
    return it->get<std::int64_t>();
}

inline std::optional<std::int64_t> opt_int_param(const ExperimentConfig &c, const std::string &key)
{
    if (!c.parameters.contains(key)) {
        return std::nullopt;
    }
    return int_param(c, key);
}

inline std::vector<std::string> ops_param(const ExperimentConfig &c)
{
    const auto it = c.parameters.find("op");
    if (it == c.parameters.end() || !it->is_array() || it->empty()) {
        throw usage_error(command_name(c.command) + ": at least one --op is required");
    }
    std::vector<std::string> out;
    for (const auto &v : *it) {
        if (!v.is_string()) {
            throw usage_error(command_name(c.command) + ": --op must be operator text");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline WeylElement parse_op(const std::string &text)
{
    try {
        return parse_weyl(text);
    } catch (const precondition_error &e) {
        throw usage_error(e.what());
    }
}

inline OperatorMatrix square_matrix(const std::vector<std::string> &ops)
{
    const auto r = static_cast<std::size_t>(std::llround(std::sqrt(double(ops.size()))));
    if (r * r != ops.size()) {
        throw usage_error("the number of --op entries must be a perfect square (row-major r x r matrix)");
    }
    OperatorMatrix m(r);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        m[i / r].push_back(parse_op(ops[i]));
    }
    return m;
}

inline std::string str(const Integer &z)
{
    return z.get_str();
}

inline json vec_json(const RationalVector &v)
{
    json a = json::array();
    for (const auto &x : v) {
        a.push_back(x.get_str());
    }
    return a;
}

inline std::optional<std::int64_t> nmax_override()
{
    const char *env = std::getenv("JETSPACE_NMAX_OVERRIDE");
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(env, &pos);
        if (pos != std::string(env).size() || v < 1) {
            throw usage_error("");
        }
        return v;
    } catch (const std::exception &) {
        throw usage_error("JETSPACE_NMAX_OVERRIDE must be a positive integer");
    }
}

inline json run_dim_do(const ExperimentConfig &c)
{
    const auto n = int_param(c, "n"), a = int_param(c, "a"), b = int_param(c, "b"), order = int_param(c, "N");
    const TwistedDOSpace s = global_do_dimension(n, a, b, order);
    return {{"n", n}, {"a", a}, {"b", b}, {"N", order}, {"dim", s.dim}, {"candidates", s.candidates.size()},
            {"box", s.box}};
}

struct growth_result {
    GrowthReport report;
    std::int64_t nmax = 0;
};

inline growth_result run_growth(const ExperimentConfig &c)
{
    const auto n = int_param(c, "n"), a = int_param(c, "a"), b = int_param(c, "b");
    std::int64_t nmax = opt_int_param(c, "nmax").value_or(default_nmax(n));
    if (const auto cap = nmax_override()) {
        nmax = std::min(nmax, *cap);
    }
    return {verify_growth(n, a, b, nmax), nmax};
}

inline json growth_footer(const growth_result &g)
{
    json f;
    f["nmax_effective"] = g.nmax;
    f["M"] = g.report.threshold ? json(*g.report.threshold) : json(nullptr);
    json coeffs = json::array();
    if (g.report.polynomial) {
        for (const auto &x : g.report.polynomial->poly.coefficients()) {
            coeffs.push_back(x.get_str());
        }
        f["P"] = g.report.polynomial->poly.to_string("N");
    }
    f["P_coeffs"] = coeffs;
    f["verdict"] = g.report.verdict;
    f["telescoping"] = g.report.telescoping;
    f["first_failure"] = g.report.first_failure ? json(*g.report.first_failure) : json(nullptr);
    return f;
}

inline json growth_rows(const growth_result &g)
{
    json rows = json::array();
    for (const auto &r : g.report.table.rows) {
        rows.push_back({{"N", r.order}, {"dim", r.dim}, {"delta", r.delta}, {"expected_delta", str(r.expected_delta)},
                        {"match", r.match}});
    }
    return rows;
}

inline json run_cohomology(const ExperimentConfig &c)
{
    const auto n = int_param(c, "n"), k = int_param(c, "k");
    const auto i = opt_int_param(c, "i");
    const auto j = opt_int_param(c, "j");
    if (j) {
        if (i) {
            throw usage_error("cohomology: --i and --j are exclusive");
        }
        const Integer h0 = h0_sym_tangent_any(n, k, *j);
        return {{"n", n}, {"k", k}, {"j", *j}, {"h0", str(h0)}, {"chi", str(chi_sym_tangent(n, k, *j))}};
    }
    if (i) {
        const std::int64_t h = cech_line_oracle(n, k, *i);
        return {{"n", n}, {"k", k}, {"i", *i}, {"h", h}};
    }
    const LineBundleCohomology lc = line_cohomology(n, k);
    json dims = json::array();
    for (const auto &d : lc.dims) {
        dims.push_back(str(d));
    }
    return {{"n", n}, {"k", k}, {"h", dims}, {"h0", str(lc.dims.front())}, {"chi", str(lc.chi)}};
}

inline json symbol_json(const SymbolMatrix &s)
{
    json entries = json::array();
    for (std::size_t i = 0; i < s.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.cols(); ++j) {
            row.push_back(symbol_entry_string(s.entry(i, j), s.chart_dim()));
        }
        entries.push_back(row);
    }
    json out{{"chart_dim", s.chart_dim()}, {"N", s.order()}, {"rank", s.rows()}, {"entries", entries},
             {"constant_coefficient", s.constant_coefficient()}, {"zero", s.is_zero()}};
    if (s.rows() == s.cols()) {
        out["determinant"] = symbol_entry_string(s.determinant(), s.chart_dim());
    }
    return out;
}

inline json run_symbol(const ExperimentConfig &c)
{
    return symbol_json(symbol_of(square_matrix(ops_param(c)), int_param(c, "N")));
}

inline json witness_json(const AlgebraicWitness &w)
{
    json out{{"text", w.to_string()}, {"by_homogeneity", w.by_homogeneity}};
    if (!w.by_homogeneity) {
        json pt = json::array();
        for (std::size_t i = 0; i < w.point.size(); ++i) {
            pt.push_back(w.root_slot == i ? std::string("t") : w.point[i].get_str());
        }
        out["point"] = pt;
    }
    if (w.root_slot) {
        out["root_polynomial"] = w.root_poly.to_string("t");
    }
    return out;
}

inline json run_elliptic(const ExperimentConfig &c)
{
    const OperatorMatrix op = square_matrix(ops_param(c));
    std::int64_t order = 0;
    for (const auto &r : op) {
        for (const auto &e : r) {
            if (const auto o = e.order()) {
                order = std::max(order, *o);
            }
        }
    }
    if (const auto given = opt_int_param(c, "N")) {
        order = *given;
    }
    const std::string mode = c.parameters.value("mode", std::string("both"));
    if (mode != "algebraic" && mode != "real" && mode != "both") {
        throw usage_error("elliptic-check: --mode must be algebraic, real or both");
    }
    const SymbolMatrix s = symbol_of(op, order);
    json out{{"N", order}, {"symbol", symbol_json(s)}, {"torus_invariant", torus_operator_check(op)}};
    if (mode != "real") {
        const AlgebraicVerdict v = elliptic_algebraic(s);
        out["algebraic"] = {{"elliptic", v.elliptic}, {"witness", v.witness ? witness_json(*v.witness) : json(nullptr)}};
        if (mode == "algebraic") {
            out["verdict"] = v.elliptic ? "true" : "false";
        }
    }
    if (mode != "algebraic") {
        const RealVerdict v = elliptic_real(s);
        json r{{"elliptic", to_string(v.elliptic)}};
        r["zero"] = v.zero ? vec_json(*v.zero) : json(nullptr);
        r["sign_change"] = v.sign_change ? json::array({vec_json(v.sign_change->first), vec_json(v.sign_change->second)})
                                         : json(nullptr);
        out["real"] = r;
        if (mode == "real") {
            out["verdict"] = to_string(v.elliptic);
        }
    }
    return out;
}

inline UniPoly parse_coefficients(const std::string &text)
{
    RationalVector cs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            cs.push_back(parse_rational(item));
        } catch (const std::exception &) {
            throw usage_error("jet: --relation must be comma-separated rationals, constant term first");
        }
    }
    if (cs.empty()) {
        throw usage_error("jet: --relation is empty");
    }
    return UniPoly(cs);
}

inline json run_jet(const ExperimentConfig &c)
{
    const auto order = int_param(c, "N");
    if (c.parameters.contains("relation")) {
        if (!c.parameters["relation"].is_string()) {
            throw usage_error("jet: --relation must be text");
        }
        const UniPoly p = parse_coefficients(c.parameters["relation"].get<std::string>());
        jetspace::detail::require(!p.is_zero(), "jet: relation must be nonzero");
        const PresentedModule jm = jet_of_presented(PresentedModule::cyclic(p), order);
        const ModuleStructure st = structure(jm);
        json torsion = json::array();
        for (const auto &d : st.torsion) {
            torsion.push_back(d.to_string("t"));
        }
        const auto len = length(jm);
        return {{"N", order}, {"relation", p.to_string("t")}, {"generators", jm.generators()},
                {"relations", jm.relation_count()}, {"free_rank", st.free_rank}, {"torsion", torsion},
                {"length", len ? json(*len) : json(nullptr)}};
    }
    const auto m = opt_int_param(c, "m").value_or(1);
    const auto r = opt_int_param(c, "rank").value_or(1);
    jetspace::detail::require(m >= 1 && r >= 0 && order >= 0, "jet: needs m >= 1, rank >= 0, N >= 0");
    return {{"N", order}, {"m", m}, {"rank", r}, {"free_rank", str(jet_free_rank(m, order, r))}};
}

inline json run_induced(const ExperimentConfig &c)
{
    const auto n = int_param(c, "n"), a = int_param(c, "a"), b = int_param(c, "b"), i = int_param(c, "i");
    const auto ops = ops_param(c);
    if (ops.size() != 1) {
        throw usage_error("induced-map: exactly one --op");
    }
    const InducedMap im = induced_cohomology_map(n, a, b, parse_op(ops.front()), i);
    json src = json::array(), tgt = json::array(), mat = json::array();
    for (const auto &g : im.source_basis) {
        src.push_back(g.to_string());
    }
    for (const auto &g : im.target_basis) {
        tgt.push_back(g.to_string());
    }
    for (std::size_t r = 0; r < im.matrix.rows(); ++r) {
        json row = json::array();
        for (std::size_t k = 0; k < im.matrix.cols(); ++k) {
            row.push_back(im.matrix.get(r, k).get_str());
        }
        mat.push_back(row);
    }
    return {{"n", n}, {"a", a}, {"b", b}, {"i", i}, {"source_basis", src}, {"target_basis", tgt}, {"matrix", mat},
            {"rank", rank(im.matrix)}};
}

inline json run_block(const ExperimentConfig &c)
{
    const auto n = int_param(c, "n"), m = int_param(c, "m"), d = int_param(c, "d");
    const auto ops = ops_param(c);
    if (ops.size() != 1) {
        throw usage_error("block-op: exactly one --op (the off-diagonal entry)");
    }
    const BlockOperator op(n, m, d, parse_op(ops.front()));
    const BlockReport rep = verify(op);
    json entries = json::array();
    for (const auto &row : op.entries()) {
        json r = json::array();
        for (const auto &e : row) {
            r.push_back(e.to_string());
        }
        entries.push_back(r);
    }
    const SymbolMatrix s = symbol_of(op.entries(), rep.expected_order);
    return {{"n", n}, {"m", m}, {"d", d}, {"entries", entries}, {"sub_preserved", rep.sub_preserved},
            {"graded_identity", rep.graded_identity}, {"order", rep.order}, {"expected_order", rep.expected_order},
            {"sections_tested", rep.sections_tested}, {"ok", rep.ok()},
            {"symbol_determinant", symbol_entry_string(s.determinant(), s.chart_dim())}};
}

inline std::string csv_field(const json &v)
{
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char ch : s) {
        q += ch;
        if (ch == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

// Generic CSV: columns key,value, one row per top-level field in key order.
inline std::string flat_csv(const json &report)
{
    std::string out = "key,value\n";
    for (const auto &[k, v] : report.items()) {
        if (k == "parameters") {
            for (const auto &[pk, pv] : v.items()) {
                out += "parameters." + pk + "," + csv_field(pv) + "\n";
            }
            continue;
        }
        out += k + "," + csv_field(v) + "\n";
    }
    return out;
}

inline json envelope(const ExperimentConfig &c, json body)
{
    body["command"] = command_name(c.command);
    body["parameters"] = c.parameters;
    body["schema_version"] = schema_version;
    return body;
}

inline std::string render(const ExperimentConfig &c)
{
    switch (c.command) {
        case Command::growth_table: {
            const growth_result g = run_growth(c);
            json footer = envelope(c, growth_footer(g));
            if (c.format == Format::csv) {
                std::string out = "N,dim,delta,expected_delta,match\n";
                for (const auto &r : g.report.table.rows) {
                    out += std::to_string(r.order) + "," + std::to_string(r.dim) + "," + std::to_string(r.delta) + ","
                           + str(r.expected_delta) + "," + (r.match ? "true" : "false") + "\n";
                }
                out += footer.dump() + "\n";
                if (!g.report.threshold) {
                    throw inconsistency_error(out + "no stabilization threshold within N_max");
                }
                return out;
            }
            footer["rows"] = growth_rows(g);
            if (!g.report.threshold) {
                throw inconsistency_error(footer.dump(2) + "\nno stabilization threshold within N_max");
            }
            return footer.dump(2) + "\n";
        }
        default:
            break;
    }
    json body;
    switch (c.command) {
        case Command::dim_do:
            body = run_dim_do(c);
            break;
        case Command::cohomology:
            body = run_cohomology(c);
            break;
        case Command::symbol:
            body = run_symbol(c);
            break;
        case Command::elliptic_check:
            body = run_elliptic(c);
            break;
        case Command::jet:
            body = run_jet(c);
            break;
        case Command::induced_map:
            body = run_induced(c);
            break;
        case Command::block_op:
            body = run_block(c);
            break;
        default:
            break;
    }
    const json report = envelope(c, std::move(body));
    return c.format == Format::csv ? flat_csv(report) : report.dump(2) + "\n";
}

} // namespace detail

inline void emit(const ExperimentConfig &c, const std::string &text, std::ostream &out)
{
    if (!c.output) {
        out << text;
        return;
    }
    std::ofstream f(*c.output, std::ios::binary);
    if (!f) {
        throw usage_error("cannot open output file " + *c.output);
    }
    f << text;
}

// 0 ok, 1 malformed config, 2 precondition failure, 3 internal inconsistency.
inline int run(const ExperimentConfig &config, std::ostream &out, std::ostream &err)
{
    try {
        emit(config, detail::render(config), out);
        return 0;
    } catch (const usage_error &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const precondition_error &e) {
        err << "precondition failed: " << e.what() << "\n";
        return 2;
    } catch (const inconsistency_error &e) {
        err << "inconsistency: " << e.what() << "\n";
        return 3;
    }
}

// Parses argv into a config; nullopt with an exit code when parsing stops
// (help requested or malformed arguments).
struct ParseOutcome {
    std::optional<ExperimentConfig> config;
    int exit_code = 0;
};

inline ParseOutcome parse_command_line(std::vector<std::string> args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact computations with differential operators on projective space", "jetspace"};
    app.require_subcommand(1);

    std::string output, format;
    std::map<std::string, std::int64_t> ints;
    std::map<std::string, std::string> strings;
    std::vector<std::string> ops;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--output", output, "Write the report to this path instead of stdout");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto int_opt = [&](CLI::App *sub, const std::string &key, bool required, const std::string &help) {
        auto *o = sub->add_option("--" + key, ints[key], help);
        if (required) {
            o->required();
        }
    };
    std::map<std::string, CLI::App *> subs;
    auto make = [&](const std::string &name, const std::string &help) {
        CLI::App *s = app.add_subcommand(name, help);
        common(s);
        subs[name] = s;
        return s;
    };

    auto *dim = make("dim-do", "Dimension of global operators O(a) -> O(b) of order <= N on P^n");
    int_opt(dim, "n", true, "projective dimension");
    int_opt(dim, "a", true, "source twist");
    int_opt(dim, "b", true, "target twist");
    int_opt(dim, "N", true, "order");

    auto *gt = make("growth-table", "Difference law and growth polynomial table (CSV by default)");
    int_opt(gt, "n", true, "projective dimension");
    int_opt(gt, "a", true, "source twist");
    int_opt(gt, "b", true, "target twist");
    int_opt(gt, "nmax", false, "largest order (default 4 for n <= 2, else 2)");

    auto *co = make("cohomology", "Line bundle cohomology, Cech oracle (--i) or h0 of S^k T(j) (--j)");
    int_opt(co, "n", true, "projective dimension");
    int_opt(co, "k", true, "twist, or symmetric power with --j");
    int_opt(co, "i", false, "cohomological degree for the Cech oracle (0 or n)");
    int_opt(co, "j", false, "twist of S^k T");

    auto *sy = make("symbol", "Principal symbol of a square operator matrix (row-major --op list)");
    sy->add_option("--op", ops, "operator text, e.g. \"1 * x^(0,0) d^(2,0) + 1 * x^(0,0) d^(0,2)\"")->required();
    int_opt(sy, "N", true, "order");

    auto *el = make("elliptic-check", "Algebraic and real ellipticity of a constant-coefficient symbol");
    el->add_option("--op", ops, "operator text (row-major matrix entries)")->required();
    int_opt(el, "N", false, "order (default: largest entry order)");
    el->add_option("--mode", strings["mode"], "algebraic, real or both")
        ->check(CLI::IsMember({"algebraic", "real", "both"}));

    auto *je = make("jet", "Jet module ranks, or J^N of Q[t]/(p)");
    int_opt(je, "N", true, "jet order");
    int_opt(je, "m", false, "number of affine variables (free case)");
    int_opt(je, "rank", false, "free rank (free case)");
    je->add_option("--relation", strings["relation"], "coefficients of p, constant term first, comma-separated");

    auto *im = make("induced-map", "Map on H^i induced by a graded operator O(a) -> O(b)");
    int_opt(im, "n", true, "projective dimension");
    int_opt(im, "a", true, "source twist");
    int_opt(im, "b", true, "target twist");
    int_opt(im, "i", true, "cohomological degree (0 or n)");
    im->add_option("--op", ops, "operator text on n+1 homogeneous variables")->required();

    auto *bo = make("block-op", "Block operator (s, t) -> (s, D12 s + t) on O(m) + O(m + d)");
    int_opt(bo, "n", true, "projective dimension");
    int_opt(bo, "m", true, "twist of the quotient summand");
    int_opt(bo, "d", true, "degree of D12");
    bo->add_option("--op", ops, "D12 as operator text")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? 0 : 1};
    }

    ExperimentConfig cfg;
    CLI::App *chosen = app.get_subcommands().front();
    cfg.command = command_names().at(chosen->get_name());
    for (const auto &[key, value] : ints) {
        if (chosen->get_option_no_throw("--" + key) != nullptr && chosen->count("--" + key) > 0) {
            cfg.parameters[key] = value;
        }
    }
    for (const auto &[key, value] : strings) {
        if (chosen->get_option_no_throw("--" + key) != nullptr && chosen->count("--" + key) > 0) {
            cfg.parameters[key] = value;
        }
    }
    if (!ops.empty()) {
        cfg.parameters["op"] = ops;
    }
    if (!output.empty()) {
        cfg.output = output;
    }
    if (format.empty()) {
        cfg.format = cfg.command == Command::growth_table ? Format::csv : Format::json;
    } else {
        cfg.format = format == "csv" ? Format::csv : Format::json;
    }
    return {cfg, 0};
}

inline int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    const ParseOutcome p = parse_command_line(args, out, err);
    if (!p.config) {
        return p.exit_code;
    }
    return run(*p.config, out, err);
}

} // namespace jetspace::cli

#endif
