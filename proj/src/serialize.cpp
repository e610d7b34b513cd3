#include "mfc/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "mfc/error.hpp"

namespace mfc {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::Io, "not a number: '" + std::string(s) + "'");
    return v;
}

std::string hash_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// Token reader with context in its error messages.
class Reader {
public:
    explicit Reader(std::istream& is) : is_(is) {}

    std::string word() {
        std::string w;
        if (!(is_ >> w)) throw Error(ErrorKind::Io, "unexpected end of file");
        return w;
    }
    void expect(const std::string& key) {
        const std::string w = word();
        if (w != key) throw Error(ErrorKind::Io, "expected '" + key + "', found '" + w + "'");
    }
    double number() { return parse_double(word()); }
    long long integer() {
        const std::string w = word();
        long long v = 0;
        const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size())
            throw Error(ErrorKind::Io, "not an integer: '" + w + "'");
        return v;
    }
    std::uint64_t unsigned_integer() {
        const std::string w = word();
        std::uint64_t v = 0;
        const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size())
            throw Error(ErrorKind::Io, "not an unsigned integer: '" + w + "'");
        return v;
    }
    std::size_t count() {
        const long long v = integer();
        if (v < 0) throw Error(ErrorKind::Io, "negative count");
        return static_cast<std::size_t>(v);
    }
    std::string keyed(const std::string& key) {
        expect(key);
        return word();
    }

private:
    std::istream& is_;
};

std::string or_dash(const std::string& s) { return s.empty() ? "-" : s; }
std::string from_dash(const std::string& s) { return s == "-" ? std::string() : s; }

void write_points(std::ostream& os, const char* key, const std::vector<Vec>& pts) {
    os << key << ' ' << pts.size() << '\n';
    for (const auto& p : pts) {
        os << p.size();
        for (double v : p) os << ' ' << format_double(v);
        os << '\n';
    }
}

std::vector<Vec> read_points(Reader& r, const std::string& key) {
    r.expect(key);
    std::vector<Vec> pts(r.count());
    for (auto& p : pts) {
        p.resize(r.count());
        for (double& v : p) v = r.number();
    }
    return pts;
}

const char* scheme_name(WeightScheme::Variant v) {
    return v == WeightScheme::Variant::DiracAtRepresentatives ? "dirac" : "sampled-uniform";
}

}  // namespace

void write_mdp(std::ostream& os, const FiniteMeasureMDP& mdp) {
    const BuildMeta& m = mdp.meta;
    os << "mfc-mdp 1\n";
    os << "kind " << to_string(m.kind) << '\n';
    os << "model " << or_dash(m.model_name) << '\n';
    os << "population " << m.population << '\n';
    os << "cells " << m.num_cells << '\n';
    os << "action_atoms " << m.num_actions << '\n';
    os << "beta " << format_double(mdp.beta) << '\n';
    os << "scheme " << scheme_name(m.scheme.variant) << ' ' << m.scheme.samples_per_bin << '\n';
    os << "seed " << m.seed << '\n';
    os << "mc_samples " << m.mc_samples << '\n';
    os << "exact " << (m.exact ? 1 : 0) << '\n';
    os << "rule_resolution " << or_dash(m.rule_resolution) << '\n';
    os << "config_hash " << or_dash(m.config_hash) << '\n';
    write_points(os, "representatives", m.representatives);
    write_points(os, "atoms", m.action_atoms);

    os << "states " << mdp.num_states() << '\n';
    for (const auto& s : mdp.states) {
        for (std::size_t i = 0; i < s.counts.size(); ++i) os << (i ? " " : "") << s.counts[i];
        os << '\n';
    }
    std::size_t entries = 0;
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        os << "state " << s << ' ' << mdp.num_actions(s) << '\n';
        for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
            os << "action " << a << ' ' << format_double(mdp.cost[s][a]);
            if (const auto* joint = std::get_if<JointEmpiricalMeasure>(&mdp.actions[s][a])) {
                os << " joint";
                for (int c : joint->counts) os << ' ' << c;
            } else {
                const auto& rule = std::get<AgentRule>(mdp.actions[s][a]);
                os << " rule " << rule.denominator;
                for (int c : rule.numerators) os << ' ' << c;
            }
            os << '\n';
            entries += mdp.kernel[s][a].size();
        }
    }
    os << "kernel " << entries << '\n';
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(s); ++a) {
            const KernelRow& row = mdp.kernel[s][a];
            for (std::size_t e = 0; e < row.size(); ++e)
                os << s << ' ' << a << ' ' << row.next[e] << ' ' << format_double(row.prob[e]) << '\n';
        }
    os << "end\n";
}

std::string mdp_to_string(const FiniteMeasureMDP& mdp) {
    std::ostringstream os;
    write_mdp(os, mdp);
    return os.str();
}

FiniteMeasureMDP read_mdp(std::istream& is) {
    Reader r(is);
    r.expect("mfc-mdp");
    if (r.integer() != 1) throw Error(ErrorKind::Io, "unsupported MDP format version");
    FiniteMeasureMDP mdp;
    BuildMeta& m = mdp.meta;
    m.kind = mdp_kind_from_string(r.keyed("kind"));
    m.model_name = from_dash(r.keyed("model"));
    r.expect("population");
    m.population = static_cast<int>(r.integer());
    r.expect("cells");
    m.num_cells = r.count();
    r.expect("action_atoms");
    m.num_actions = r.count();
    r.expect("beta");
    mdp.beta = r.number();
    const std::string scheme = r.keyed("scheme");
    if (scheme == "dirac")
        m.scheme.variant = WeightScheme::Variant::DiracAtRepresentatives;
    else if (scheme == "sampled-uniform")
        m.scheme.variant = WeightScheme::Variant::SampledUniformInBins;
    else
        throw Error(ErrorKind::Io, "unknown weight scheme '" + scheme + "'");
    m.scheme.samples_per_bin = static_cast<int>(r.integer());
    r.expect("seed");
    m.seed = r.unsigned_integer();
    r.expect("mc_samples");
    m.mc_samples = static_cast<int>(r.integer());
    r.expect("exact");
    m.exact = r.integer() != 0;
    m.rule_resolution = from_dash(r.keyed("rule_resolution"));
    m.config_hash = from_dash(r.keyed("config_hash"));
    m.representatives = read_points(r, "representatives");
    m.action_atoms = read_points(r, "atoms");
    if (m.representatives.size() != m.num_cells || m.action_atoms.size() != m.num_actions)
        throw Error(ErrorKind::Io, "header dimensions disagree with the listed points");

    r.expect("states");
    const std::size_t S = r.count();
    mdp.states.resize(S);
    for (auto& st : mdp.states) {
        std::vector<int> counts(m.num_cells);
        for (int& c : counts) c = static_cast<int>(r.integer());
        st = EmpiricalMeasure(std::move(counts));
    }
    mdp.actions.resize(S);
    mdp.cost.resize(S);
    mdp.kernel.resize(S);
    const std::size_t block = m.num_cells * m.num_actions;
    for (std::size_t s = 0; s < S; ++s) {
        r.expect("state");
        if (r.count() != s) throw Error(ErrorKind::Io, "states out of order");
        const std::size_t A = r.count();
        mdp.actions[s].reserve(A);
        mdp.cost[s].resize(A);
        mdp.kernel[s].resize(A);
        for (std::size_t a = 0; a < A; ++a) {
            r.expect("action");
            if (r.count() != a) throw Error(ErrorKind::Io, "actions out of order");
            mdp.cost[s][a] = r.number();
            const std::string type = r.word();
            if (type == "joint") {
                JointEmpiricalMeasure j;
                j.num_cells = m.num_cells;
                j.num_actions = m.num_actions;
                j.counts.resize(block);
                for (int& c : j.counts) {
                    c = static_cast<int>(r.integer());
                    j.total += c;
                }
                mdp.actions[s].emplace_back(std::move(j));
            } else if (type == "rule") {
                AgentRule rule;
                rule.num_cells = m.num_cells;
                rule.num_actions = m.num_actions;
                rule.denominator = static_cast<int>(r.integer());
                rule.numerators.resize(block);
                for (int& c : rule.numerators) c = static_cast<int>(r.integer());
                mdp.actions[s].emplace_back(std::move(rule));
            } else {
                throw Error(ErrorKind::Io, "unknown action type '" + type + "'");
            }
        }
    }
    r.expect("kernel");
    const std::size_t entries = r.count();
    for (std::size_t e = 0; e < entries; ++e) {
        const std::size_t s = r.count(), a = r.count(), next = r.count();
        const double p = r.number();
        if (s >= S || a >= mdp.actions[s].size() || next >= S)
            throw Error(ErrorKind::Io, "kernel entry out of range");
        mdp.kernel[s][a].next.push_back(static_cast<std::uint32_t>(next));
        mdp.kernel[s][a].prob.push_back(p);
    }
    r.expect("end");
    return mdp;
}

void write_solution(std::ostream& os, const SolutionFile& sol) {
    const SolveResult& res = sol.result;
    os << "mfc-solution 1\n";
    os << "mdp_hash " << or_dash(sol.mdp_hash) << '\n';
    os << "config_hash " << or_dash(sol.config_hash) << '\n';
    os << "iterations " << res.iterations << '\n';
    os << "converged " << (res.converged ? 1 : 0) << '\n';
    os << "gaps " << res.gaps.size() << '\n';
    for (double g : res.gaps) os << format_double(g) << '\n';
    os << "values " << res.value.values.size() << '\n';
    for (std::size_t s = 0; s < res.value.values.size(); ++s)
        os << format_double(res.value.values[s]) << ' ' << res.policy.choice.at(s) << '\n';
    os << "end\n";
}

SolutionFile read_solution(std::istream& is) {
    Reader r(is);
    r.expect("mfc-solution");
    if (r.integer() != 1) throw Error(ErrorKind::Io, "unsupported solution format version");
    SolutionFile sol;
    sol.mdp_hash = from_dash(r.keyed("mdp_hash"));
    sol.config_hash = from_dash(r.keyed("config_hash"));
    r.expect("iterations");
    sol.result.iterations = static_cast<int>(r.integer());
    r.expect("converged");
    sol.result.converged = r.integer() != 0;
    r.expect("gaps");
    sol.result.gaps.resize(r.count());
    for (double& g : sol.result.gaps) g = r.number();
    r.expect("values");
    const std::size_t S = r.count();
    sol.result.value.values.resize(S);
    sol.result.policy.choice.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        sol.result.value.values[s] = r.number();
        sol.result.policy.choice[s] = r.count();
    }
    r.expect("end");
    return sol;
}

void write_values_csv(std::ostream& os, const FiniteMeasureMDP& mdp, const SolveResult& result) {
    for (std::size_t i = 0; i < mdp.meta.num_cells; ++i) os << "count_" << i << ',';
    os << "value,action\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        for (int c : mdp.states[s].counts) os << c << ',';
        os << format_double(result.value.values.at(s)) << ',' << result.policy.choice.at(s) << '\n';
    }
}

void write_policy(std::ostream& os, const PolicyFile& file) {
    const AgentPolicy& p = file.policy;
    os << "mfc-policy 1\n";
    os << "config_hash " << or_dash(file.config_hash) << '\n';
    os << "grid_signature " << or_dash(file.grid_signature) << '\n';
    os << "kind " << to_string(p.kind) << '\n';
    os << "population " << p.population << '\n';
    os << "cells " << p.num_cells << '\n';
    os << "action_atoms " << p.num_actions << '\n';
    os << "states " << p.num_states() << '\n';
    for (std::size_t s = 0; s < p.num_states(); ++s)
        for (std::size_t c = 0; c < p.num_cells; ++c) {
            const auto row = p.rule(s, c);
            for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << format_double(row[k]);
            os << '\n';
        }
    os << "end\n";
}

PolicyFile read_policy(std::istream& is) {
    Reader r(is);
    r.expect("mfc-policy");
    if (r.integer() != 1) throw Error(ErrorKind::Io, "unsupported policy format version");
    PolicyFile f;
    f.config_hash = from_dash(r.keyed("config_hash"));
    f.grid_signature = from_dash(r.keyed("grid_signature"));
    f.policy.kind = mdp_kind_from_string(r.keyed("kind"));
    r.expect("population");
    f.policy.population = static_cast<int>(r.integer());
    r.expect("cells");
    f.policy.num_cells = r.count();
    r.expect("action_atoms");
    f.policy.num_actions = r.count();
    r.expect("states");
    const std::size_t S = r.count();
    f.policy.probs.resize(S * f.policy.num_cells * f.policy.num_actions);
    for (double& p : f.policy.probs) p = r.number();
    r.expect("end");
    return f;
}

std::string grid_signature(const std::vector<Vec>& representatives, const std::vector<Vec>& action_atoms,
                           int population) {
    std::ostringstream os;
    write_points(os, "representatives", representatives);
    write_points(os, "atoms", action_atoms);
    os << "population " << population << '\n';
    return hash_hex(os.str());
}

}  // namespace mfc
