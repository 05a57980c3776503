/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smckit/encoders.hpp"
#include "smckit/error.hpp"
#include "smckit/harness.hpp"
#include "smckit/oracle.hpp"
#include "smckit/pdr.hpp"
#include "smckit/report.hpp"
#include "smckit/sat.hpp"
#include "smckit/system.hpp"

namespace smckit::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::uint64_t budget = 1'000'000;
    std::uint64_t seed = 42;
    unsigned jobs = 1;
    std::string format = "text";
    std::string solver_cmd;
    std::string out_dir = ".";

    SolverConfig solver() const
    {
        SolverConfig c;
        c.options.conflict_budget = budget;
        c.options.seed = seed;
        c.external_command = solver_cmd;
        if (c.external_command.empty())
            if (const char * env = std::getenv("SMCKIT_SOLVER")) c.external_command = env;
        return c;
    }
};

void add_common(CLI::App & cmd, Common & c)
{
    cmd.add_option("--budget", c.budget, "Conflict budget per solver call")->capture_default_str();
    cmd.add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd.add_option("--jobs", c.jobs, "Parallel workers")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    cmd.add_option("--solver-cmd", c.solver_cmd, "External DIMACS solver command ({input}, {output})");
    cmd.add_option("--out-dir", c.out_dir, "Directory for written files")->capture_default_str();
}

std::string read_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> render_trace(const StateSeq & ss)
{
    std::vector<std::string> out;
    for (State s : ss.states()) out.push_back(format_state(s, ss.width()));
    return out;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
    std::string input;
    std::string engine = "sheeran1";
    std::optional<unsigned> k;
    unsigned k_max = 64;
};

Verdict run_check(const TransitionSystem & sys, const CheckArgs & a, const Common & c)
{
    const SolverConfig solver = c.solver();
    if (a.engine == "oracle") {
        const oracle::ReachReport r = oracle::reach(sys);
        if (r.safe) return Verdict::safe(r.depth);
        const auto k = static_cast<unsigned>(r.shortest_cex->size() - 1);
        return Verdict::unsafe(k, *r.shortest_cex);
    }
    if (a.engine == "pdr") {
        PdrOptions p;
        p.k_max = a.k.value_or(a.k_max);
        p.solver = solver;
        return run_pdr(sys, p);
    }
    const Method m = *parse_method(a.engine);
    UnboundedOptions opts{a.k.value_or(a.k_max), solver, c.jobs};
    if (m == Method::Bounded) return run_bmc(sys, opts);
    if (a.k) return check_at(sys, m, *a.k, opts);
    return run_unbounded(sys, m, opts);
}

int cmd_check(const CheckArgs & a, const Common & c, std::ostream & out)
{
    const TransitionSystem sys = load_system(a.input);
    const Verdict v = run_check(sys, a, c);

    report::CheckReport r;
    r.system = sys.name();
    r.engine = a.engine;
    r.verdict = std::string(to_string(v.outcome));
    r.k = v.k;
    if (v.trace) r.trace = render_trace(*v.trace);
    r.reason = v.reason;
    if (v.certificate) {
        fs::create_directories(c.out_dir);
        const fs::path path = fs::path(c.out_dir) / (sys.name() + ".cert");
        std::ofstream f(path);
        if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
        f << "c certificate for " << sys.name() << " at k=" << v.k << '\n' << write_certificate(*v.certificate);
        r.certificate = path.string();
    }

    if (c.format == "json") {
        out << report::to_json(r) << '\n';
    } else {
        out << r.verdict << " k=" << r.k;
        if (!r.reason.empty()) out << ": " << r.reason;
        out << '\n';
        for (std::size_t i = 0; i < r.trace.size(); ++i) out << "step " << i << ": " << r.trace[i] << '\n';
        if (r.certificate) out << "certificate: " << *r.certificate << '\n';
    }
    switch (v.outcome) {
    case Verdict::Outcome::Safe: return kSafe;
    case Verdict::Outcome::Unsafe: return kUnsafe;
    case Verdict::Outcome::Unknown: return kUnknown;
    }
    return kUnknown;
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
    std::string system;
    std::string certificate;
    unsigned k = 0;
};

int cmd_certify(const CertifyArgs & a, const Common & c, std::ostream & out)
{
    const TransitionSystem sys = load_system(a.system);
    const FrameSeq frames = parse_certificate(read_file(a.certificate), sys.width());
    const TruePostReport rep = check_true_postcondition(frames, a.k, sys, CheckMethod::Auto, c.solver());

    report::CertifyReport r;
    r.system = sys.name();
    r.k = a.k;
    r.exists_form = rep.exists_form;
    for (const auto & it : rep.items)
        r.items.push_back({it.item, it.pass, it.index, it.witness ? render_trace(*it.witness) : std::vector<std::string>{}});

    if (c.format == "json") {
        out << report::to_json(r) << '\n';
    } else {
        for (const auto & it : r.items) {
            out << '(' << it.item << ") " << (it.pass ? "PASS" : "FAIL");
            if (!it.pass) {
                out << " at i=" << *it.index << ", witness";
                for (const auto & s : it.witness) out << ' ' << s;
            }
            out << '\n';
        }
        out << "exists-form of (e): " << (r.exists_form ? "holds" : "fails") << " (reported only)\n";
    }
    return rep.all_pass() ? kSafe : kUnsafe;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
    std::string input;
    std::string engine = "bmc";
    unsigned k = 0;
};

int cmd_export(const ExportArgs & a, const Common & c, std::ostream & out)
{
    const TransitionSystem sys = load_system(a.input);
    const auto m = parse_method(a.engine);
    if (!m) throw CLI::ValidationError("--engine", "export supports bmc, forward, backward, sheeran1, kind");
    const EncodedFormula f = encode(*m, sys, a.k);

    fs::create_directories(c.out_dir);
    const auto leaves = f.leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const std::string stem =
            sys.name() + "." + a.engine + ".k" + std::to_string(a.k) + ".q" + std::to_string(i);
        const fs::path cnf = fs::path(c.out_dir) / (stem + ".cnf");
        const fs::path smt = fs::path(c.out_dir) / (stem + ".smt2");
        std::ofstream fc(cnf), fsmt(smt);
        if (!fc || !fsmt) throw Error(ErrorKind::IoError, "cannot write into " + c.out_dir);
        fc << export_dimacs(query_cnf(*leaves[i]));
        fsmt << export_smt2(*leaves[i], sys.width());
        out << cnf.string() << '\n' << smt.string() << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct FuzzArgs {
    harness::CorpusSpec spec;
    harness::DiffOptions diff;
    std::size_t trials = 1000;
    std::size_t converse_trials = 10'000;
};

int cmd_fuzz(FuzzArgs a, const Common & c, std::ostream & out)
{
    if (a.spec.min_width > a.spec.max_width) throw CLI::ValidationError("--min-width", "exceeds --max-width");
    a.spec.seed = c.seed;
    a.diff.jobs = c.jobs;
    a.diff.conflict_budget = c.budget;

    report::FuzzReport r;
    r.soundness = harness::differential_soundness(a.spec, a.diff);
    r.ssp = harness::ssp_suite(c.seed, a.trials, a.converse_trials);
    const bool converse_ok = a.converse_trials == 0 || a.trials == 0 || r.ssp.converse.has_value();
    r.passed = r.soundness.violations.empty() && r.ssp.failures() == 0 && converse_ok;

    out << (c.format == "json" ? report::to_json(r) + "\n" : report::text_table(r));
    return r.passed ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_sat(const std::string & path, const Common & c, std::ostream & out)
{
    const CnfFormula cnf = parse_dimacs(read_file(path));
    SolverOptions o;
    o.conflict_budget = c.budget;
    o.seed = c.seed;
    try {
        const SatResult r = solve(cnf, o);
        out << format_solver_output(r);
        return r.sat() ? 10 : 20;
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::ResourceLimit) throw;
        out << "s UNKNOWN\n";
        return 0;
    }
}

} // namespace

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
    CLI::App app{"SAT-based safety model checker"};
    app.require_subcommand(1);
    Common common;

    CheckArgs check;
    auto * c_check = app.add_subcommand("check", "Decide safety of a system");
    c_check->add_option("input", check.input, "System file (.smc)")->required();
    c_check->add_option("--engine", check.engine, "Engine")
        ->check(CLI::IsMember({"bmc", "forward", "backward", "sheeran1", "kind", "pdr", "oracle"}))
        ->capture_default_str();
    auto * k_opt = c_check->add_option("--k", check.k, "Single round at this k");
    c_check->add_option("--k-max", check.k_max, "Iterate k up to this bound")->excludes(k_opt)->capture_default_str();
    add_common(*c_check, common);

    CertifyArgs certify;
    auto * c_cert = app.add_subcommand("certify", "Check a frame certificate against items (a)-(e)");
    c_cert->add_option("system", certify.system, "System file (.smc)")->required();
    c_cert->add_option("certificate", certify.certificate, "Certificate file")->required();
    c_cert->add_option("--k", certify.k, "Convergence index")->required();
    add_common(*c_cert, common);

    ExportArgs exp;
    auto * c_exp = app.add_subcommand("export", "Write every validity query as DIMACS and SMT-LIB2");
    c_exp->add_option("input", exp.input, "System file (.smc)")->required();
    c_exp->add_option("--engine", exp.engine, "Encoder")
        ->check(CLI::IsMember({"bmc", "forward", "backward", "sheeran1", "kind"}))
        ->capture_default_str();
    c_exp->add_option("--k", exp.k, "Encoding depth")->required();
    add_common(*c_exp, common);

    FuzzArgs fuzz;
    auto * c_fuzz = app.add_subcommand("fuzz", "Differential soundness run and sequence-lemma suite");
    c_fuzz->add_option("--count", fuzz.spec.count, "Corpus size")->capture_default_str();
    c_fuzz->add_option("--min-width", fuzz.spec.min_width, "Smallest width")
        ->check(CLI::Range(1U, oracle::kLoopFreeWidthCap))
        ->capture_default_str();
    c_fuzz->add_option("--max-width", fuzz.spec.max_width, "Largest width")
        ->check(CLI::Range(1U, oracle::kLoopFreeWidthCap))
        ->capture_default_str();
    c_fuzz->add_option("--trials", fuzz.trials, "Trials per lemma")->capture_default_str();
    c_fuzz->add_option("--converse-trials", fuzz.converse_trials, "Trial cap for the ss&p 5 converse search")
        ->capture_default_str();
    c_fuzz->add_option("--lasso-k-max", fuzz.diff.lasso_k_max, "k bound for the lasso engines")->capture_default_str();
    c_fuzz->add_flag("--inject-liar", fuzz.diff.inject_liar, "Add an engine that always answers Safe (self-test)");
    add_common(*c_fuzz, common);
    c_fuzz->get_option("--budget")->default_val(20'000);

    std::string sat_input;
    auto * c_sat = app.add_subcommand("sat", "Solve a DIMACS file with the built-in solver");
    c_sat->add_option("input", sat_input, "DIMACS file")->required();
    add_common(*c_sat, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (c_check->parsed()) return cmd_check(check, common, out);
        if (c_cert->parsed()) return cmd_certify(certify, common, out);
        if (c_exp->parsed()) return cmd_export(exp, common, out);
        if (c_fuzz->parsed()) return cmd_fuzz(fuzz, common, out);
        if (c_sat->parsed()) return cmd_sat(sat_input, common, out);
    } catch (const CLI::ParseError & e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError & e) {
        err << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const Error & e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
        case ErrorKind::IoError:
        case ErrorKind::WidthTooLarge: return kUsage;
        case ErrorKind::SyntaxError:
        case ErrorKind::UndeclaredVariable:
        case ErrorKind::NextInInit:
        case ErrorKind::WidthMismatch:
        case ErrorKind::CertificateParseError: return kParse;
        case ErrorKind::ResourceLimit:
        case ErrorKind::NonClausalProperty:
        case ErrorKind::MalformedSolverOutput: return kUnknown;
        default: return kInternal;
        }
    } catch (const std::exception & e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

} // namespace smckit::cli
