#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "simlab/fin_structure.hpp"
#include "simlab/l0.hpp"
#include "simlab/words.hpp"

namespace simlab {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what),
          line(line_) {}
};

// Structure text format, line oriented:
//   class <graph|linear_order|ordered_rational_metric|eq_pairs>
//   size <n>
//   rel <edge|lt|eq> <i> <j>
//   dist <i> <j> <p>/<q>
//   pauto <name> <i>-><j> <i>-><j> ...
// '#' starts a comment; blank lines are ignored. The parser rejects invalid
// structures with line-numbered errors.
struct StructureFile {
    FinStructure structure;
    std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> pautos;
};

StructureFile parse_structure_text(const std::string& text);
StructureFile load_structure_file(const std::string& path);
std::string structure_to_text(
    const FinStructure& s,
    const std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>>&
        pautos = {});

// Word syntax: space-separated letters "s1 s2^-1 s1"; "e" is the empty word.
ReducedWord parse_word(const std::string& text, int arity = 0);  // 0: inferred
std::string word_to_string(const ReducedWord& w);

// Step function format:
//   step <ambient point count>
//   piece <p>/<q> <permutation>
// where the permutation is a one-line image list "1 0 2" or cycle notation
// "(0 1)(2 3)".
struct StepFile {
    int ambient_size = 0;
    StepFunction<Perm> function;
};

StepFile parse_step_text(const std::string& text);
StepFile load_step_file(const std::string& path);
std::string step_to_text(int ambient_size, const StepFunction<Perm>& f);

std::string perm_to_string(const Perm& p);  // comma-separated image list

}  // namespace simlab
