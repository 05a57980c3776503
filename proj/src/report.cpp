/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/report.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace smckit::report {

using nlohmann::json;

namespace {

json header(std::string_view kind) { return json{{"schema", kSchema}, {"kind", kind}}; }

json parse_doc(std::string_view text, std::string_view kind)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error & e) {
        throw std::invalid_argument(std::string("report is not JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema", "") != kSchema)
        throw std::invalid_argument("unsupported report schema");
    if (doc.value("kind", "") != kind) throw std::invalid_argument("expected a " + std::string(kind) + " report");
    return doc;
}

template <class T>
T field(const json & doc, const char * name)
{
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception & e) {
        throw std::invalid_argument(std::string("report field '") + name + "': " + e.what());
    }
}

} // namespace

std::string to_json(const CheckReport & r)
{
    json doc = header("check");
    doc["system"] = r.system;
    doc["engine"] = r.engine;
    doc["verdict"] = r.verdict;
    doc["k"] = r.k;
    doc["trace"] = r.trace;
    doc["certificate"] = r.certificate ? json(*r.certificate) : json(nullptr);
    doc["reason"] = r.reason;
    return doc.dump(2);
}

CheckReport parse_check(std::string_view text)
{
    const json doc = parse_doc(text, "check");
    CheckReport r;
    r.system = field<std::string>(doc, "system");
    r.engine = field<std::string>(doc, "engine");
    r.verdict = field<std::string>(doc, "verdict");
    r.k = field<unsigned>(doc, "k");
    r.trace = field<std::vector<std::string>>(doc, "trace");
    if (!doc.at("certificate").is_null()) r.certificate = field<std::string>(doc, "certificate");
    r.reason = field<std::string>(doc, "reason");
    return r;
}

std::string to_json(const CertifyReport & r)
{
    json doc = header("certify");
    doc["system"] = r.system;
    doc["k"] = r.k;
    json items = json::array();
    for (const auto & it : r.items)
        items.push_back({{"item", std::string(1, it.item)},
                         {"pass", it.pass},
                         {"index", it.index ? json(*it.index) : json(nullptr)},
                         {"witness", it.witness}});
    doc["items"] = std::move(items);
    doc["exists_form"] = r.exists_form;
    return doc.dump(2);
}

CertifyReport parse_certify(std::string_view text)
{
    const json doc = parse_doc(text, "certify");
    CertifyReport r;
    r.system = field<std::string>(doc, "system");
    r.k = field<unsigned>(doc, "k");
    for (const auto & it : doc.at("items")) {
        CertifyItem c;
        const auto name = field<std::string>(it, "item");
        if (name.size() != 1) throw std::invalid_argument("bad item name");
        c.item = name[0];
        c.pass = field<bool>(it, "pass");
        if (!it.at("index").is_null()) c.index = field<std::size_t>(it, "index");
        c.witness = field<std::vector<std::string>>(it, "witness");
        r.items.push_back(std::move(c));
    }
    r.exists_form = field<bool>(doc, "exists_form");
    return r;
}

std::string to_json(const FuzzReport & r)
{
    const auto & s = r.soundness;
    json engines = json::array();
    for (const auto & e : s.engines)
        engines.push_back({{"engine", e.engine}, {"safe", e.safe}, {"unsafe", e.unsafe}, {"unknown", e.unknown}});
    json violations = json::array();
    for (const auto & v : s.violations)
        violations.push_back({{"index", v.index}, {"engine", v.engine}, {"detail", v.detail}});

    json lemmas = json::array();
    for (const auto & l : r.ssp.lemmas)
        lemmas.push_back(
            {{"lemma", l.lemma}, {"trials", l.trials}, {"failures", l.failures}, {"vacuous", l.vacuous}});
    json converse = nullptr;
    if (const auto & c = r.ssp.converse)
        converse = {{"trans", c->trans}, {"width", c->width}, {"states", c->states},
                    {"j", c->j},         {"k", c->k},         {"trial", c->trial}};

    json doc = header("fuzz");
    doc["passed"] = r.passed;
    doc["soundness"] = {{"seed", s.seed},
                        {"systems", s.systems},
                        {"oracle_safe", s.oracle_safe},
                        {"oracle_unsafe", s.oracle_unsafe},
                        {"loopfree_mismatches", s.loopfree_mismatches},
                        {"unsafe_traces_validated", s.unsafe_traces_validated},
                        {"certificates_checked", s.certificates_checked},
                        {"engines", std::move(engines)},
                        {"violations", std::move(violations)}};
    doc["ssp"] = {{"seed", r.ssp.seed},
                  {"lemmas", std::move(lemmas)},
                  {"converse_trials", r.ssp.converse_trials},
                  {"converse", std::move(converse)}};
    return doc.dump(2);
}

FuzzReport parse_fuzz(std::string_view text)
{
    const json doc = parse_doc(text, "fuzz");
    FuzzReport r;
    r.passed = field<bool>(doc, "passed");

    const json & s = doc.at("soundness");
    auto & out = r.soundness;
    out.seed = field<std::uint64_t>(s, "seed");
    out.systems = field<std::size_t>(s, "systems");
    out.oracle_safe = field<std::size_t>(s, "oracle_safe");
    out.oracle_unsafe = field<std::size_t>(s, "oracle_unsafe");
    out.loopfree_mismatches = field<std::size_t>(s, "loopfree_mismatches");
    out.unsafe_traces_validated = field<std::size_t>(s, "unsafe_traces_validated");
    out.certificates_checked = field<std::size_t>(s, "certificates_checked");
    for (const auto & e : s.at("engines"))
        out.engines.push_back({field<std::string>(e, "engine"), field<std::size_t>(e, "safe"),
                               field<std::size_t>(e, "unsafe"), field<std::size_t>(e, "unknown")});
    for (const auto & v : s.at("violations"))
        out.violations.push_back(
            {field<std::size_t>(v, "index"), field<std::string>(v, "engine"), field<std::string>(v, "detail")});

    const json & p = doc.at("ssp");
    r.ssp.seed = field<std::uint64_t>(p, "seed");
    for (const auto & l : p.at("lemmas"))
        r.ssp.lemmas.push_back({field<std::string>(l, "lemma"), field<std::size_t>(l, "trials"),
                                field<std::size_t>(l, "failures"), field<std::size_t>(l, "vacuous")});
    r.ssp.converse_trials = field<std::size_t>(p, "converse_trials");
    if (const json & c = p.at("converse"); !c.is_null())
        r.ssp.converse = harness::ConverseWitness{field<std::string>(c, "trans"),
                                                  field<unsigned>(c, "width"),
                                                  field<std::vector<std::uint64_t>>(c, "states"),
                                                  field<std::size_t>(c, "j"),
                                                  field<std::size_t>(c, "k"),
                                                  field<std::size_t>(c, "trial")};
    return r;
}

std::string text_table(const FuzzReport & r)
{
    const auto & s = r.soundness;
    std::ostringstream out;
    out << "corpus seed=" << s.seed << " systems=" << s.systems << " oracle_safe=" << s.oracle_safe
        << " oracle_unsafe=" << s.oracle_unsafe << '\n';
    out << std::left << std::setw(10) << "engine" << std::right << std::setw(8) << "safe" << std::setw(8)
        << "unsafe" << std::setw(9) << "unknown" << std::setw(12) << "violations" << '\n';
    for (const auto & e : s.engines) {
        std::size_t bad = 0;
        for (const auto & v : s.violations) bad += v.engine == e.engine ? 1 : 0;
        out << std::left << std::setw(10) << e.engine << std::right << std::setw(8) << e.safe << std::setw(8)
            << e.unsafe << std::setw(9) << e.unknown << std::setw(12) << bad << '\n';
    }
    out << "loop-free/reach mismatches: " << s.loopfree_mismatches << '\n';
    out << "unsafe traces validated: " << s.unsafe_traces_validated << '\n';
    out << "pdr certificates re-checked: " << s.certificates_checked << '\n';
    for (const auto & v : s.violations)
        out << "VIOLATION system " << v.index << " [" << v.engine << "] " << v.detail << '\n';

    out << std::left << std::setw(10) << "lemma" << std::right << std::setw(8) << "trials" << std::setw(10)
        << "failures" << std::setw(9) << "vacuous" << '\n';
    for (const auto & l : r.ssp.lemmas)
        out << std::left << std::setw(10) << l.lemma << std::right << std::setw(8) << l.trials << std::setw(10)
            << l.failures << std::setw(9) << l.vacuous << '\n';
    if (const auto & c = r.ssp.converse) {
        out << "ssp5 converse counterexample after " << c->trial << " trials: trans " << c->trans << ", states [";
        for (std::size_t i = 0; i < c->states.size(); ++i) out << (i ? "," : "") << c->states[i];
        out << "], j=" << c->j << " k=" << c->k << '\n';
    } else {
        out << "ssp5 converse counterexample NOT found in " << r.ssp.converse_trials << " trials\n";
    }
    out << (r.passed ? "PASS" : "FAIL") << '\n';
    return out.str();
}

} // namespace smckit::report
