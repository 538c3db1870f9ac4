#include "simlab/io.hpp"

#include <fstream>
#include <sstream>

namespace simlab {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

int parse_index(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    }
}

const char* rel_name_for(ClassTag tag) {
    switch (tag) {
        case ClassTag::Graph: return "edge";
        case ClassTag::LinearOrder:
        case ClassTag::OrderedRationalMetric: return "lt";
        case ClassTag::EqPairs: return "eq";
    }
    return "?";
}

}  // namespace

StructureFile parse_structure_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    bool have_class = false, have_size = false;
    StructureFile out;
    FinStructure& s = out.structure;

    std::vector<std::vector<Rat>> dist;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "class") {
            if (toks.size() != 2) throw ParseError(lineno, "class needs one tag");
            auto tag = class_tag_from_name(toks[1]);
            if (!tag) throw ParseError(lineno, "unknown class tag '" + toks[1] + "'");
            s.tag = *tag;
            have_class = true;
        } else if (head == "size") {
            if (!have_class) throw ParseError(lineno, "size before class");
            if (toks.size() != 2) throw ParseError(lineno, "size needs one integer");
            s.n = parse_index(toks[1], lineno);
            if (s.n < 0) throw ParseError(lineno, "size must be nonnegative");
            have_size = true;
            if (s.tag == ClassTag::OrderedRationalMetric)
                dist.assign(s.n, std::vector<Rat>(s.n, Rat(0)));
        } else if (head == "rel") {
            if (!have_size) throw ParseError(lineno, "rel before size");
            if (toks.size() != 4)
                throw ParseError(lineno, "rel needs a name and two indices");
            if (toks[1] != rel_name_for(s.tag))
                throw ParseError(lineno, "relation '" + toks[1] +
                                             "' does not belong to class " +
                                             class_tag_name(s.tag));
            int a = parse_index(toks[2], lineno), b = parse_index(toks[3], lineno);
            if (a < 0 || a >= s.n || b < 0 || b >= s.n)
                throw ParseError(lineno, "relation index out of range");
            s.rel.emplace_back(a, b);
        } else if (head == "dist") {
            if (!have_size) throw ParseError(lineno, "dist before size");
            if (s.tag != ClassTag::OrderedRationalMetric)
                throw ParseError(lineno, "dist only applies to the metric class");
            if (toks.size() != 4)
                throw ParseError(lineno, "dist needs two indices and a rational");
            int a = parse_index(toks[1], lineno), b = parse_index(toks[2], lineno);
            if (a < 0 || a >= s.n || b < 0 || b >= s.n)
                throw ParseError(lineno, "dist index out of range");
            Rat v;
            try {
                v = parse_rat(toks[3]);
            } catch (const std::exception& e) {
                throw ParseError(lineno, e.what());
            }
            dist[a][b] = v;
            dist[b][a] = v;
        } else if (head == "pauto") {
            if (!have_size) throw ParseError(lineno, "pauto before size");
            if (toks.size() < 2) throw ParseError(lineno, "pauto needs a name");
            std::vector<std::pair<int, int>> pairs;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                auto arrow = toks[i].find("->");
                if (arrow == std::string::npos)
                    throw ParseError(lineno, "pauto pair must look like 2->3");
                int a = parse_index(toks[i].substr(0, arrow), lineno);
                int b = parse_index(toks[i].substr(arrow + 2), lineno);
                if (a < 0 || a >= s.n || b < 0 || b >= s.n)
                    throw ParseError(lineno, "pauto point out of range");
                pairs.emplace_back(a, b);
            }
            out.pautos.emplace_back(toks[1], std::move(pairs));
        } else {
            throw ParseError(lineno, "unknown directive '" + head + "'");
        }
    }
    if (!have_class) throw ParseError(lineno, "missing class line");
    if (!have_size) throw ParseError(lineno, "missing size line");
    if (s.tag == ClassTag::OrderedRationalMetric) s.dist = std::move(dist);
    s.normalize();
    if (!is_valid(s))
        throw ParseError(lineno, "structure violates the class axioms");
    return out;
}

StructureFile load_structure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open structure file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_structure_text(buf.str());
}

std::string structure_to_text(
    const FinStructure& s,
    const std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>>&
        pautos) {
    std::ostringstream out;
    out << "class " << class_tag_name(s.tag) << "\n";
    out << "size " << s.n << "\n";
    for (const auto& [a, b] : s.rel)
        out << "rel " << rel_name_for(s.tag) << " " << a << " " << b << "\n";
    if (s.tag == ClassTag::OrderedRationalMetric)
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j)
                out << "dist " << i << " " << j << " " << rat_to_string(s.dist[i][j])
                    << "\n";
    for (const auto& [name, pairs] : pautos) {
        out << "pauto " << name;
        for (const auto& [a, b] : pairs) out << " " << a << "->" << b;
        out << "\n";
    }
    return out.str();
}

ReducedWord parse_word(const std::string& text, int arity) {
    std::istringstream in(text);
    std::string tok;
    std::vector<Letter> letters;
    int max_gen = 1;
    while (in >> tok) {
        if (tok == "e") continue;
        int sign = 1;
        std::string body = tok;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            std::string power = tok.substr(caret + 1);
            if (power != "-1")
                throw DomainError("word letter '" + tok + "': only ^-1 is supported");
            sign = -1;
            body = tok.substr(0, caret);
        }
        if (body.size() < 2 || body[0] != 's')
            throw DomainError("word letter '" + tok + "': expected s<k>");
        int gen;
        try {
            std::size_t used = 0;
            gen = std::stoi(body.substr(1), &used);
            if (used != body.size() - 1) throw std::invalid_argument(body);
        } catch (const std::exception&) {
            throw DomainError("word letter '" + tok + "': bad generator index");
        }
        if (gen < 1) throw DomainError("word letter '" + tok + "': generators start at s1");
        max_gen = std::max(max_gen, gen);
        letters.push_back(Letter{gen, sign});
    }
    int n = arity > 0 ? arity : max_gen;
    return reduce(letters, n);  // reduce validates the range
}

std::string word_to_string(const ReducedWord& w) {
    if (w.empty()) return "e";
    std::ostringstream out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) out << " ";
        out << "s" << w.letters[i].generator;
        if (w.letters[i].sign < 0) out << "^-1";
    }
    return out.str();
}

namespace {

Perm parse_perm_tokens(const std::vector<std::string>& toks, std::size_t from,
                       int n, int line) {
    std::string joined;
    for (std::size_t i = from; i < toks.size(); ++i) {
        if (i > from) joined += " ";
        joined += toks[i];
    }
    Perm p;
    if (joined.find('(') != std::string::npos) {
        // cycle notation
        p = identity_perm(n);
        std::string body = joined;
        std::size_t pos = 0;
        while ((pos = body.find('(')) != std::string::npos) {
            std::size_t end = body.find(')', pos);
            if (end == std::string::npos)
                throw ParseError(line, "unbalanced parenthesis in cycle");
            std::istringstream cyc(body.substr(pos + 1, end - pos - 1));
            std::vector<int> pts;
            std::string t;
            while (cyc >> t) pts.push_back(parse_index(t, line));
            for (int v : pts)
                if (v < 0 || v >= n) throw ParseError(line, "cycle point out of range");
            for (std::size_t i = 0; i < pts.size(); ++i)
                p[pts[i]] = pts[(i + 1) % pts.size()];
            body = body.substr(end + 1);
        }
    } else {
        std::istringstream in(joined);
        std::string t;
        while (in >> t) p.push_back(parse_index(t, line));
        if (static_cast<int>(p.size()) != n)
            throw ParseError(line, "image list length differs from ambient size");
    }
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n || seen[v])
            throw ParseError(line, "not a permutation of the ambient points");
        seen[v] = 1;
    }
    return p;
}

}  // namespace

StepFile parse_step_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    StepFile out;
    bool have_header = false;
    std::vector<std::pair<Rat, Perm>> pieces;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (toks[0] == "step") {
            if (toks.size() != 2) throw ParseError(lineno, "step needs the point count");
            out.ambient_size = parse_index(toks[1], lineno);
            if (out.ambient_size < 1)
                throw ParseError(lineno, "ambient must have at least one point");
            have_header = true;
        } else if (toks[0] == "piece") {
            if (!have_header) throw ParseError(lineno, "piece before step header");
            if (toks.size() < 3)
                throw ParseError(lineno, "piece needs a weight and a permutation");
            Rat w;
            try {
                w = parse_rat(toks[1]);
            } catch (const std::exception& e) {
                throw ParseError(lineno, e.what());
            }
            if (w <= 0) throw ParseError(lineno, "piece weight must be positive");
            pieces.emplace_back(w, parse_perm_tokens(toks, 2, out.ambient_size, lineno));
        } else {
            throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!have_header) throw ParseError(lineno, "missing step header");
    try {
        out.function = make_step(std::move(pieces));
    } catch (const DomainError& e) {
        throw ParseError(lineno, e.what());
    }
    return out;
}

StepFile load_step_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open step file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_step_text(buf.str());
}

std::string step_to_text(int ambient_size, const StepFunction<Perm>& f) {
    std::ostringstream out;
    out << "step " << ambient_size << "\n";
    for (const auto& [w, v] : f.pieces) {
        out << "piece " << rat_to_string(w);
        for (int img : v) out << " " << img;
        out << "\n";
    }
    return out.str();
}

std::string perm_to_string(const Perm& p) {
    std::ostringstream out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out << ",";
        out << p[i];
    }
    return out.str();
}

}  // namespace simlab
