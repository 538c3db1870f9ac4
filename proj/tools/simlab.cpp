// simlab: desk-scale experiments with automorphism groups of finite
// structures and step-function groups over them. Subcommands cover word
// calculus, extension-property search, trichotomy evidence and the L0 toolkit.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "simlab/extension.hpp"
#include "simlab/fin_structure.hpp"
#include "simlab/hrushovski.hpp"
#include "simlab/io.hpp"
#include "simlab/l0.hpp"
#include "simlab/partial_auto.hpp"
#include "simlab/rational.hpp"
#include "simlab/trichotomy.hpp"
#include "simlab/words.hpp"

namespace {

using namespace simlab;

int thread_cap() {
    const char* env = std::getenv("SIMLAB_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v > 0 ? v : 1;
}

// Header line echoing the effective configuration; output below it is a
// deterministic function of the config, regardless of the worker cap.
void emit_header(std::ostream& out, const std::string& cmd,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
    out << "# cmd=" << cmd;
    for (const auto& [k, v] : kv) out << "\t" << k << "=" << v;
    out << "\tthreads=" << thread_cap() << "\n";
}

std::vector<PartialAutomorphism> maps_of(
    const StructureFile& file, const std::shared_ptr<const FinStructure>& amb) {
    std::vector<PartialAutomorphism> maps;
    for (const auto& [name, pairs] : file.pautos) {
        auto p = PartialAutomorphism::from_pairs(amb, pairs);
        if (!is_partial_automorphism(p))
            throw DomainError("pauto " + name + " is not a partial automorphism");
        maps.push_back(std::move(p));
    }
    return maps;
}

std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

std::vector<std::vector<int>> parse_targets(const std::string& spec,
                                            const std::vector<int>& base) {
    if (spec.rfind("prefix:", 0) == 0) {
        int k = std::stoi(spec.substr(7));
        return prefix_targets(base, k);
    }
    std::vector<std::vector<int>> out;
    std::stringstream in(spec);
    std::string group;
    while (std::getline(in, group, ';'))
        if (!group.empty()) out.push_back(parse_index_list(group));
    return out;
}

std::string pauto_to_string(const PartialAutomorphism& p) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [a, b] : p.pairs()) {
        if (!first) out << " ";
        out << a << "->" << b;
        first = false;
    }
    if (first) out << "(empty)";
    return out.str();
}

// ---- subcommand bodies -----------------------------------------------------

void run_reduce(const std::string& word_text, std::uint64_t seed) {
    ReducedWord w = parse_word(word_text);
    emit_header(std::cout, "reduce",
                {{"word", word_text}, {"seed", std::to_string(seed)}});
    std::cout << "result\t" << word_to_string(w) << "\n";
}

void run_surgery(const std::string& u_text, const std::string& x_text,
                 std::uint64_t seed) {
    ReducedWord u = parse_word(u_text), x = parse_word(x_text);
    int arity = std::max({2, u.arity, x.arity});
    u = reduce(u.letters, arity);
    x = reduce(x.letters, arity);
    ReducedWord out = surgery(u, x);
    emit_header(std::cout, "surgery",
                {{"u", u_text}, {"x", x_text}, {"seed", std::to_string(seed)}});
    std::cout << "result\t" << word_to_string(out) << "\n";
}

void run_eppa(const std::string& input, int max_size, std::uint64_t seed) {
    StructureFile file = load_structure_file(input);
    auto amb = std::make_shared<const FinStructure>(file.structure);
    auto maps = maps_of(file, amb);
    emit_header(std::cout, "eppa",
                {{"input", input},
                 {"max_size", std::to_string(max_size)},
                 {"seed", std::to_string(seed)}});
    auto witness = eppa_check(file.structure, maps, max_size);
    if (!witness) {
        std::cout << "result\tnone\n";
        return;
    }
    std::cout << "result\tsome\n";
    std::cout << "B_size\t" << witness->extension.n << "\n";
    for (const Perm& p : witness->autos) std::cout << "auto\t" << perm_to_string(p) << "\n";
}

void run_chain(const std::string& input, int depth, int max_size,
               std::uint64_t seed) {
    StructureFile file = load_structure_file(input);
    auto amb = std::make_shared<const FinStructure>(file.structure);
    auto maps = maps_of(file, amb);
    ClassDescriptor cls(file.structure.tag);
    emit_header(std::cout, "chain",
                {{"input", input},
                 {"depth", std::to_string(depth)},
                 {"max_size", std::to_string(max_size)},
                 {"seed", std::to_string(seed)}});
    HrushovskiChain chain = hrushovski_chain(cls, file.structure, maps, depth, max_size);
    for (std::size_t i = 0; i < chain.stages.size(); ++i)
        std::cout << "stage\t" << (i + 1) << "\t" << chain.stages[i].n << "\n";
    for (const Perm& p : chain.totals)
        std::cout << "auto\t" << perm_to_string(p) << "\n";
}

void run_classify(const std::string& input, int word_bound,
                  const std::string& base_spec, const std::string& target_spec,
                  std::uint64_t seed) {
    StructureFile file = load_structure_file(input);
    auto amb = std::make_shared<const FinStructure>(file.structure);
    auto maps = maps_of(file, amb);
    if (maps.empty()) throw DomainError("classify: the input file declares no pauto");
    ClassDescriptor cls(file.structure.tag);

    std::vector<int> base;
    if (base_spec.empty())
        for (int i = 0; i < file.structure.n; ++i) base.push_back(i);
    else
        base = parse_index_list(base_spec);
    auto targets = parse_targets(target_spec, base);

    emit_header(std::cout, "classify",
                {{"input", input},
                 {"word_bound", std::to_string(word_bound)},
                 {"base", base_spec.empty() ? "all" : base_spec},
                 {"targets", target_spec},
                 {"seed", std::to_string(seed)}});
    TrichotomyVerdict v = classify(cls, maps, base, word_bound, targets);
    std::cout << "verdict\t" << verdict_tag_name(v.tag) << "\n";
    switch (v.tag) {
        case VerdictTag::PrecompactEvidence:
            for (const auto& [pt, size] : v.orbit_sizes)
                std::cout << "orbit\t" << pt << "\t" << size << "\n";
            break;
        case VerdictTag::DiscreteEvidence: {
            std::cout << "separating_set\t";
            for (std::size_t i = 0; i < v.separating_set.size(); ++i)
                std::cout << (i ? "," : "") << v.separating_set[i];
            std::cout << "\nword_bound\t" << v.word_bound << "\n";
            break;
        }
        case VerdictTag::NonDiscreteWitness:
            for (const auto& e : v.witnesses) {
                std::cout << "witness\t" << word_to_string(e.word) << "\t";
                for (std::size_t i = 0; i < e.fixed_set.size(); ++i)
                    std::cout << (i ? "," : "") << e.fixed_set[i];
                std::cout << "\t" << e.moved_point << "\n";
            }
            break;
        case VerdictTag::Inconclusive:
            std::cout << "words_scanned\t" << v.words_scanned << "\n";
            break;
    }
}

void run_witness_q(int size, int depth, std::uint64_t seed) {
    emit_header(std::cout, "witness-q",
                {{"size", std::to_string(size)},
                 {"depth", std::to_string(depth)},
                 {"seed", std::to_string(seed)}});
    PairWitness w = nondiscrete_witness_pairs_q(size, depth, seed);
    std::cout << "f\t" << pauto_to_string(w.maps[0]) << "\n";
    std::cout << "g\t" << pauto_to_string(w.maps[1]) << "\n";
    std::cout << "designated\t";
    for (std::size_t i = 0; i < w.designated.size(); ++i)
        std::cout << (i ? "," : "") << w.designated[i];
    std::cout << "\n";
    for (const auto& e : w.words) {
        std::cout << "word\t" << word_to_string(e.word) << "\t";
        for (std::size_t i = 0; i < e.fixed_set.size(); ++i)
            std::cout << (i ? "," : "") << e.fixed_set[i];
        std::cout << "\t" << e.moved_point << "\n";
    }
}

void run_jep(const std::vector<std::string>& inputs, const std::string& d0_text,
             const std::string& output, std::uint64_t seed) {
    if (inputs.empty()) throw DomainError("jep: need at least one --input");
    std::vector<System> systems;
    for (const auto& path : inputs) {
        StructureFile file = load_structure_file(path);
        auto amb = std::make_shared<const FinStructure>(file.structure);
        systems.push_back(System{file.structure, maps_of(file, amb)});
    }
    ClassDescriptor cls(systems[0].structure.tag);
    (void)d0_text;  // reserved: the stack uses max(1, max diameter)
    SystemJepWitness w = diagonal_conjugacy_jep(cls, systems);
    emit_header(std::cout, "jep",
                {{"inputs", std::to_string(inputs.size())},
                 {"seed", std::to_string(seed)}});
    std::cout << "size\t" << w.structure->n << "\n";
    for (std::size_t i = 0; i < w.embeddings.size(); ++i) {
        std::cout << "embedding\t" << i << "\t";
        for (std::size_t j = 0; j < w.embeddings[i].map.size(); ++j)
            std::cout << (j ? "," : "") << w.embeddings[i].map[j];
        std::cout << "\n";
    }
    for (const auto& m : w.maps) std::cout << "map\t" << pauto_to_string(m) << "\n";
    if (!output.empty()) {
        std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> pa;
        for (std::size_t j = 0; j < w.maps.size(); ++j)
            pa.emplace_back("q" + std::to_string(j + 1), w.maps[j].pairs());
        std::ofstream out(output);
        if (!out) throw DomainError("cannot write output file: " + output);
        out << structure_to_text(*w.structure, pa);
    }
}

void run_l0_rho(const std::string& file_a, const std::string& file_b,
                std::uint64_t seed) {
    StepFile a = load_step_file(file_a), b = load_step_file(file_b);
    if (a.ambient_size != b.ambient_size)
        throw DomainError("l0 rho: ambient sizes differ");
    emit_header(std::cout, "l0-rho",
                {{"a", file_a}, {"b", file_b}, {"seed", std::to_string(seed)}});
    std::cout << "rho\t" << rat_to_string(rho(a.function, b.function)) << "\n";
}

void run_l0_orbit(const std::string& structure_path, const std::string& file_f,
                  const std::string& file_g, std::uint64_t seed) {
    StructureFile sf = load_structure_file(structure_path);
    StepFile f = load_step_file(file_f), g = load_step_file(file_g);
    if (f.ambient_size != sf.structure.n || g.ambient_size != sf.structure.n)
        throw DomainError("l0 orbit: step ambient differs from the structure");
    emit_header(std::cout, "l0-orbit",
                {{"structure", structure_path},
                 {"f", file_f},
                 {"g", file_g},
                 {"seed", std::to_string(seed)}});
    auto phi = orbit_member(g.function, f.function, sf.structure);
    if (!phi) {
        std::cout << "result\tnone\n";
        return;
    }
    std::cout << "result\tsome\n";
    for (const auto& [w, v] : phi->pieces)
        std::cout << "piece\t" << rat_to_string(w) << "\t" << perm_to_string(v) << "\n";
}

void run_l0_nondiscrete(const std::vector<std::string>& inputs,
                        const std::string& eps_text, int budget,
                        std::uint64_t seed) {
    if (inputs.empty()) throw DomainError("l0 nondiscrete: need --input files");
    std::vector<System> systems;
    for (const auto& path : inputs) {
        StructureFile file = load_structure_file(path);
        auto amb = std::make_shared<const FinStructure>(file.structure);
        systems.push_back(System{file.structure, maps_of(file, amb)});
    }
    ClassDescriptor cls(systems[0].structure.tag);
    Rat eps = parse_rat(eps_text);
    emit_header(std::cout, "l0-nondiscrete",
                {{"inputs", std::to_string(inputs.size())},
                 {"eps", eps_text},
                 {"budget", std::to_string(budget)},
                 {"seed", std::to_string(seed)}});
    L0NonDiscreteness out = l0_nondiscrete_from_jep(cls, systems, eps, budget);
    std::cout << "word\t" << word_to_string(out.word) << "\n";
    std::cout << "rho\t" << rat_to_string(out.rho_value) << "\n";
    std::cout << "ambient_size\t" << out.ambient->n << "\n";
    for (std::size_t j = 0; j < out.functions.size(); ++j) {
        std::cout << "function\t" << j << "\t";
        bool first = true;
        for (const auto& [w, v] : out.functions[j].pieces) {
            if (!first) std::cout << " | ";
            std::cout << rat_to_string(w) << ": " << pauto_to_string(v);
            first = false;
        }
        std::cout << "\n";
    }
    int piece = project_nondiscreteness(out.functions, {out.word}, eps);
    std::cout << "projected_piece\t" << piece << "\n";
}

void run_l0_closure(const std::string& input, int bound, std::uint64_t seed) {
    StepFile f = load_step_file(input);
    emit_header(std::cout, "l0-closure",
                {{"input", input},
                 {"bound", std::to_string(bound)},
                 {"seed", std::to_string(seed)}});
    auto closure = l0_precompact_closure(f.function, bound);
    if (!closure) {
        std::cout << "result\toverflow\n";
        return;
    }
    std::cout << "result\tsome\n";
    std::cout << "size\t" << closure->size() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "simlab: finite-scale experiments with automorphism groups, the "
        "extension property for partial automorphisms, trichotomy evidence, "
        "and step-function groups with the convergence-in-measure metric"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for every pseudo-random choice")
        ->capture_default_str();

    std::string word_text;
    auto* cmd_reduce = app.add_subcommand(
        "reduce", "freely reduce a word over s1..sn (free-group normal form)");
    cmd_reduce->add_option("word", word_text, "word, e.g. \"s1 s2^-1 s1\"")
        ->required();

    std::string u_text, x_text;
    auto* cmd_surgery = app.add_subcommand(
        "surgery",
        "conjugation surgery: a reduced word v*u equal to u^-1 x' u for a "
        "conjugation variant x' of x");
    cmd_surgery->add_option("--u", u_text, "suffix word u")->required();
    cmd_surgery->add_option("--x", x_text, "source word x")->required();

    std::string input;
    int max_size = 12;
    auto* cmd_eppa = app.add_subcommand(
        "eppa",
        "extension property for partial automorphisms: smallest extension on "
        "which the declared pautos become total automorphisms");
    cmd_eppa->add_option("--input", input, "structure file")->required();
    cmd_eppa->add_option("--max-size", max_size, "largest extension size tried")
        ->capture_default_str();

    int depth = 2;
    auto* cmd_chain = app.add_subcommand(
        "chain",
        "iterated extension-property chain; maps become total at every stage");
    cmd_chain->add_option("--input", input, "structure file")->required();
    cmd_chain->add_option("--depth", depth, "number of stages")->capture_default_str();
    cmd_chain->add_option("--max-size", max_size, "largest extension size per stage")
        ->capture_default_str();

    int word_bound = 6;
    std::string base_spec, target_spec = "prefix:3";
    auto* cmd_classify = app.add_subcommand(
        "classify",
        "trichotomy evidence for the declared tuple: precompact / discrete / "
        "non-discrete witness at the given scale");
    cmd_classify->add_option("--input", input, "structure file with pautos")
        ->required();
    cmd_classify->add_option("--word-bound", word_bound, "reduced-word scan bound")
        ->capture_default_str();
    cmd_classify->add_option("--base", base_spec,
                             "comma-separated base points (default: all)");
    cmd_classify->add_option(
        "--targets", target_spec,
        "fix targets: prefix:k for nested base prefixes, or lists like 0;0,1")
        ->capture_default_str();

    int size = 40;
    auto* cmd_witness = app.add_subcommand(
        "witness-q",
        "seeded pair on a linear-order truncation with words fixing growing "
        "designated sets while moving a point");
    cmd_witness->add_option("--size", size, "truncation size")->capture_default_str();
    cmd_witness->add_option("--depth", depth, "number of nested witnesses")
        ->capture_default_str();

    std::vector<std::string> inputs;
    std::string d0_text = "1", output;
    auto* cmd_jep = app.add_subcommand(
        "jep",
        "joint embedding of systems (structure, pautos): stacked order with "
        "united maps");
    cmd_jep->add_option("--input", inputs, "system files (repeatable)")->required();
    cmd_jep->add_option("--d0", d0_text, "reserved cross-distance override");
    cmd_jep->add_option("--output", output, "write the joint system here");

    auto* cmd_l0 = app.add_subcommand("l0", "step-function group toolkit");
    cmd_l0->require_subcommand(1);

    std::string file_a, file_b, structure_path;
    auto* cmd_rho = cmd_l0->add_subcommand(
        "rho", "exact convergence-in-measure distance between two step files");
    cmd_rho->add_option("a", file_a, "step file")->required();
    cmd_rho->add_option("b", file_b, "step file")->required();

    auto* cmd_orbit = cmd_l0->add_subcommand(
        "orbit", "step conjugator taking f to g pointwise, when one exists");
    cmd_orbit->add_option("--structure", structure_path, "ambient structure file")
        ->required();
    cmd_orbit->add_option("--f", file_a, "step file f")->required();
    cmd_orbit->add_option("--g", file_b, "step file g")->required();

    std::string eps_text = "1/4";
    int budget = 16;
    auto* cmd_nondisc = cmd_l0->add_subcommand(
        "nondiscrete",
        "step functions from a joint system plus a word with 0 < rho(w(f),e) "
        "< eps");
    cmd_nondisc->add_option("--input", inputs, "system files (repeatable)")
        ->required();
    cmd_nondisc->add_option("--epsilon", eps_text, "strict upper bound for rho")
        ->capture_default_str();
    cmd_nondisc->add_option("--budget", budget, "ambient growth budget")
        ->capture_default_str();

    int bound = 64;
    auto* cmd_closure = cmd_l0->add_subcommand(
        "closure", "closure of a step function under pointwise group operations");
    cmd_closure->add_option("--input", input, "step file")->required();
    cmd_closure->add_option("--bound", bound, "overflow bound")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_reduce)) run_reduce(word_text, seed);
        else if (app.got_subcommand(cmd_surgery)) run_surgery(u_text, x_text, seed);
        else if (app.got_subcommand(cmd_eppa)) run_eppa(input, max_size, seed);
        else if (app.got_subcommand(cmd_chain)) run_chain(input, depth, max_size, seed);
        else if (app.got_subcommand(cmd_classify))
            run_classify(input, word_bound, base_spec, target_spec, seed);
        else if (app.got_subcommand(cmd_witness)) run_witness_q(size, depth, seed);
        else if (app.got_subcommand(cmd_jep)) run_jep(inputs, d0_text, output, seed);
        else if (app.got_subcommand(cmd_l0)) {
            if (cmd_l0->got_subcommand(cmd_rho)) run_l0_rho(file_a, file_b, seed);
            else if (cmd_l0->got_subcommand(cmd_orbit))
                run_l0_orbit(structure_path, file_a, file_b, seed);
            else if (cmd_l0->got_subcommand(cmd_nondisc))
                run_l0_nondiscrete(inputs, eps_text, budget, seed);
            else if (cmd_l0->got_subcommand(cmd_closure))
                run_l0_closure(input, bound, seed);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
