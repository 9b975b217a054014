#include "lm4opt/formulation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

namespace lm4opt {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::size_t find_ci(const std::string& haystack_lower, std::string_view needle,
                    std::size_t from = 0) {
    return haystack_lower.find(lower(needle), from);
}

bool is_letter(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

// Lexical items the constraint scanner cares about.
enum class TokKind { RelOp, OpenBrace, CloseBrace, RowBreak, Comma, Semicolon, Newline, Other };

struct Tok {
    TokKind kind;
    std::size_t pos;   // byte offset in the scanned region
    std::size_t len;
};

constexpr std::array<std::string_view, 6> kRelCommands = {"leq", "geq", "le", "ge", "neq", "ne"};

// One pass over raw LaTeX. Escaped braces (\{ \}) do not open scopes, "\\"
// is a row break, backslash-commands are atomic, and the UTF-8 operators
// (≤ ≥ ≠) plus the ASCII digraphs (<= >= == !=) each count once.
std::vector<Tok> scan(std::string_view s) {
    std::vector<Tok> toks;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\\') {
            if (i + 1 < s.size() && s[i + 1] == '\\') {
                toks.push_back({TokKind::RowBreak, i, 2});
                i += 2;
                continue;
            }
            if (i + 1 < s.size() && is_letter(s[i + 1])) {
                std::size_t j = i + 1;
                while (j < s.size() && is_letter(s[j])) {
                    ++j;
                }
                std::string_view cmd = s.substr(i + 1, j - i - 1);
                bool rel = std::find(kRelCommands.begin(), kRelCommands.end(), cmd) !=
                           kRelCommands.end();
                toks.push_back({rel ? TokKind::RelOp : TokKind::Other, i, j - i});
                i = j;
                continue;
            }
            // Escaped single char, e.g. \{ \} \$ — never structural.
            toks.push_back({TokKind::Other, i, std::min<std::size_t>(2, s.size() - i)});
            i += toks.back().len;
            continue;
        }
        if (c == '{') {
            toks.push_back({TokKind::OpenBrace, i, 1});
            ++i;
            continue;
        }
        if (c == '}') {
            toks.push_back({TokKind::CloseBrace, i, 1});
            ++i;
            continue;
        }
        if (c == '<' || c == '>' || c == '=' || c == '!') {
            bool digraph = i + 1 < s.size() && s[i + 1] == '=';
            if (c == '!' && !digraph) {
                toks.push_back({TokKind::Other, i, 1});
                ++i;
                continue;
            }
            toks.push_back({TokKind::RelOp, i, digraph ? 2u : 1u});
            i += toks.back().len;
            continue;
        }
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size() &&
            static_cast<unsigned char>(s[i + 1]) == 0x89) {
            unsigned char third = static_cast<unsigned char>(s[i + 2]);
            if (third == 0xA4 || third == 0xA5 || third == 0xA0) {  // ≤ ≥ ≠
                toks.push_back({TokKind::RelOp, i, 3});
                i += 3;
                continue;
            }
        }
        if (c == '\n') {
            toks.push_back({TokKind::Newline, i, 1});
        } else if (c == ',') {
            toks.push_back({TokKind::Comma, i, 1});
        } else if (c == ';') {
            toks.push_back({TokKind::Semicolon, i, 1});
        } else {
            toks.push_back({TokKind::Other, i, 1});
        }
        ++i;
    }
    return toks;
}

// Drops alignment ampersands and squeezes whitespace runs.
std::string clean_fragment(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\\' && i + 1 < s.size() && s[i + 1] == '\\') {
            pending_space = true;
            i += 2;
            continue;
        }
        if (c == '&') {
            pending_space = true;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = true;
            ++i;
            continue;
        }
        if (pending_space && !out.empty()) {
            out += ' ';
        }
        pending_space = false;
        out += c;
        ++i;
    }
    return out;
}

struct Segment {
    std::size_t begin;
    std::size_t end;
    std::vector<std::size_t> op_positions;  // byte offsets of top-level rel ops
};

// Splits the constraint region into one segment per top-level relational
// operator. Separator candidates are row breaks, newlines and top-level
// commas/semicolons; separator-delimited pieces without an operator are
// glued to their neighbour so quantifier suffixes stay with the constraint.
std::vector<std::string> split_constraints(std::string_view region) {
    auto toks = scan(region);
    long depth = 0;
    std::vector<Segment> pieces;
    Segment cur{0, 0, {}};
    auto flush = [&](std::size_t end) {
        cur.end = end;
        if (cur.end > cur.begin) {
            pieces.push_back(cur);
        }
        cur = Segment{end, end, {}};
    };
    for (const auto& t : toks) {
        switch (t.kind) {
            case TokKind::OpenBrace:
                ++depth;
                break;
            case TokKind::CloseBrace:
                depth = std::max(0L, depth - 1);
                break;
            case TokKind::RelOp:
                if (depth == 0) {
                    cur.op_positions.push_back(t.pos);
                }
                break;
            case TokKind::RowBreak:
            case TokKind::Newline:
                if (depth == 0) {
                    flush(t.pos);
                    cur.begin = cur.end = t.pos + t.len;
                }
                break;
            case TokKind::Comma:
            case TokKind::Semicolon:
                if (depth == 0) {
                    flush(t.pos);
                    cur.begin = cur.end = t.pos + t.len;
                }
                break;
            case TokKind::Other:
                break;
        }
    }
    flush(region.size());

    // Merge operator-less pieces: forward onto the next piece until one with
    // an operator exists, backward onto the previous one afterwards.
    std::vector<Segment> merged;
    for (const auto& p : pieces) {
        if (!merged.empty() && p.op_positions.empty()) {
            merged.back().end = p.end;
            continue;
        }
        if (!merged.empty() && merged.back().op_positions.empty()) {
            merged.back().end = p.end;
            merged.back().op_positions = p.op_positions;
            continue;
        }
        merged.push_back(p);
    }
    if (merged.size() == 1 && merged.front().op_positions.empty()) {
        return {};
    }

    std::vector<std::string> out;
    for (const auto& seg : merged) {
        if (seg.op_positions.empty()) {
            continue;  // trailing junk with no operator anywhere
        }
        // A segment holding k operators becomes k constraints, cut just
        // before each operator after the first.
        std::size_t start = seg.begin;
        for (std::size_t oi = 1; oi <= seg.op_positions.size(); ++oi) {
            std::size_t end = oi < seg.op_positions.size() ? seg.op_positions[oi] : seg.end;
            std::string text = clean_fragment(region.substr(start, end - start));
            if (!text.empty()) {
                out.push_back(std::move(text));
            }
            start = end;
        }
    }
    return out;
}

struct MarkerHit {
    std::size_t pos;
    std::size_t len;
};

std::optional<MarkerHit> find_st_marker(const std::string& low) {
    constexpr std::array<std::string_view, 3> markers = {"s.t.", "subject to", "constraints:"};
    std::optional<MarkerHit> best;
    for (auto m : markers) {
        auto p = find_ci(low, m);
        if (p != std::string::npos && (!best || p < best->pos)) {
            best = MarkerHit{p, m.size()};
        }
    }
    return best;
}

ObjectiveSense detect_sense(const std::string& low_region) {
    constexpr std::array<std::string_view, 2> max_markers = {"\\max", "maximize"};
    constexpr std::array<std::string_view, 2> min_markers = {"\\min", "minimize"};
    std::size_t max_pos = std::string::npos;
    std::size_t min_pos = std::string::npos;
    for (auto m : max_markers) {
        max_pos = std::min(max_pos, low_region.find(lower(m)));
    }
    for (auto m : min_markers) {
        min_pos = std::min(min_pos, low_region.find(lower(m)));
    }
    if (max_pos == min_pos) {
        return ObjectiveSense::Unknown;  // both npos
    }
    return max_pos < min_pos ? ObjectiveSense::Max : ObjectiveSense::Min;
}

// Symbol part of a bullet: contents of the first $...$ group when present,
// truncated at a "\in" domain qualifier.
std::string extract_symbol(std::string_view before_colon) {
    std::string text = trim(before_colon);
    if (!text.empty() && (text.front() == '-' || text.front() == '*')) {
        text = trim(std::string_view(text).substr(1));
    }
    auto first = text.find('$');
    if (first != std::string::npos) {
        auto second = text.find('$', first + 1);
        if (second != std::string::npos) {
            text = trim(std::string_view(text).substr(first + 1, second - first - 1));
        } else {
            text = trim(std::string_view(text).substr(first + 1));
        }
    }
    // Cut at the \in command if one appears.
    for (std::size_t i = 0; i + 2 < text.size(); ++i) {
        if (text[i] == '\\' && text[i + 1] == 'i' && text[i + 2] == 'n' &&
            (i + 3 >= text.size() || !is_letter(text[i + 3]))) {
            return trim(std::string_view(text).substr(0, i));
        }
    }
    return text;
}

// Position of the first ':' outside inline math. '$' toggles math mode,
// "\$" does not.
std::optional<std::size_t> find_gloss_colon(std::string_view s) {
    bool in_math = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\\' && i + 1 < s.size()) {
            ++i;
            continue;
        }
        if (c == '$') {
            in_math = !in_math;
            continue;
        }
        if (c == ':' && !in_math) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<Definition> parse_definitions(std::string_view region) {
    std::vector<std::string> bullets;
    std::size_t pos = 0;
    std::string current;
    auto flush = [&]() {
        std::string t = trim(current);
        if (!t.empty()) {
            bullets.push_back(std::move(t));
        }
        current.clear();
    };
    while (pos <= region.size()) {
        std::size_t nl = region.find('\n', pos);
        std::string_view line =
            region.substr(pos, (nl == std::string_view::npos ? region.size() : nl) - pos);
        std::string trimmed = trim(line);
        bool starts_bullet = !trimmed.empty() && (trimmed[0] == '-' || trimmed[0] == '*');
        if (starts_bullet) {
            flush();
            current = trimmed.substr(1);
        } else if (!current.empty() && !trimmed.empty()) {
            current += ' ';
            current += trimmed;
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    flush();

    std::vector<Definition> defs;
    for (const auto& bullet : bullets) {
        auto colon = find_gloss_colon(bullet);
        std::string symbol_part = colon ? bullet.substr(0, *colon) : bullet;
        std::string gloss = colon ? trim(std::string_view(bullet).substr(*colon + 1)) : "";
        std::string symbol = extract_symbol(symbol_part);
        if (symbol.empty()) {
            continue;
        }
        bool duplicate = std::any_of(defs.begin(), defs.end(),
                                     [&](const Definition& d) { return d.symbol == symbol; });
        if (duplicate) {
            continue;
        }
        defs.push_back({std::move(symbol), std::move(gloss)});
    }
    return defs;
}

}  // namespace

std::string to_string(ObjectiveSense sense) {
    switch (sense) {
        case ObjectiveSense::Min:
            return "min";
        case ObjectiveSense::Max:
            return "max";
        case ObjectiveSense::Unknown:
            return "unknown";
    }
    return "unknown";
}

std::size_t count_top_level_relops(std::string_view text) {
    auto toks = scan(text);
    long depth = 0;
    std::size_t count = 0;
    for (const auto& t : toks) {
        if (t.kind == TokKind::OpenBrace) {
            ++depth;
        } else if (t.kind == TokKind::CloseBrace) {
            depth = std::max(0L, depth - 1);
        } else if (t.kind == TokKind::RelOp && depth == 0) {
            ++count;
        }
    }
    return count;
}

Formulation parse_formulation(std::string_view text) {
    Formulation f;
    f.raw_text = std::string(text);
    if (text.empty()) {
        return f;
    }
    std::string low = lower(text);

    auto st = find_st_marker(low);
    std::size_t where_search_from = st ? st->pos + st->len : 0;
    std::size_t where_pos = find_ci(low, "where:", where_search_from);

    std::size_t obj_end = st ? st->pos : (where_pos != std::string::npos ? where_pos : text.size());
    f.objective_expression = clean_fragment(text.substr(0, obj_end));
    f.objective_sense = detect_sense(low.substr(0, obj_end));

    if (st) {
        std::size_t c_begin = st->pos + st->len;
        std::size_t c_end = where_pos != std::string::npos ? where_pos : text.size();
        std::string_view region = text.substr(c_begin, c_end - c_begin);
        // Trim marker residue such as the "}}"" left by \text{{s.t.}}.
        std::size_t lead = 0;
        while (lead < region.size() &&
               (region[lead] == '}' || std::isspace(static_cast<unsigned char>(region[lead])))) {
            ++lead;
        }
        f.constraints = split_constraints(region.substr(lead));
    }

    if (where_pos != std::string::npos) {
        f.definitions = parse_definitions(text.substr(where_pos + 6));
        if (!f.definitions.empty()) {
            f.notes.push_back(
                "definitions list may mix decision variables with parameters and sets");
        }
    }
    return f;
}

StructuralStats structural_stats(const Formulation& f) {
    return {f.constraints.size(), f.definitions.size(), f.objective_sense};
}

StructuralDiff structural_diff(const Formulation& candidate, const Formulation& reference) {
    StructuralDiff d;
    d.sense_match = candidate.objective_sense == reference.objective_sense;
    d.constraint_delta = static_cast<long>(candidate.constraints.size()) -
                         static_cast<long>(reference.constraints.size());
    d.definition_delta = static_cast<long>(candidate.definitions.size()) -
                         static_cast<long>(reference.definitions.size());
    return d;
}

}  // namespace lm4opt
