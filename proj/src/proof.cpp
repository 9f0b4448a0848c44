#include <sstream>

#include "paralab/prover.hpp"

namespace paralab {

std::string to_transcript(const Proof& p) {
  std::string out;
  for (std::size_t k = 0; k < p.lines.size(); ++k) {
    const ProofLine& l = p.lines[k];
    out += std::to_string(k + 1);
    if (l.kind == ProofLine::Kind::Axiom)
      out += " AX " + l.schema_id;
    else
      out += " CD " + std::to_string(l.major) + "," + std::to_string(l.minor);
    out += ' ';
    out += print(l.formula);
    out += '\n';
  }
  return out;
}

namespace {

std::size_t parse_index(const std::string& s, std::size_t line_no) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ProofFormatError("line " + std::to_string(line_no) + ": bad line reference '" + s + "'");
  return std::stoul(s);
}

}  // namespace

Proof proof_from_transcript(const std::string& text) {
  Proof p;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t line_no = p.lines.size() + 1;
    std::istringstream ls(raw);
    std::string num, tag, ref;
    if (!(ls >> num >> tag >> ref)) throw ProofFormatError("line " + std::to_string(line_no) + ": too few fields");
    if (parse_index(num, line_no) != line_no)
      throw ProofFormatError("line " + std::to_string(line_no) + ": expected number " + std::to_string(line_no));
    std::string rest;
    std::getline(ls, rest);
    ProofLine l;
    try {
      l.formula = parse(rest);
    } catch (const SyntaxError& e) {
      throw ProofFormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (tag == "AX") {
      l.kind = ProofLine::Kind::Axiom;
      l.schema_id = ref;
    } else if (tag == "CD") {
      auto comma = ref.find(',');
      if (comma == std::string::npos)
        throw ProofFormatError("line " + std::to_string(line_no) + ": CD needs <major>,<minor>");
      l.kind = ProofLine::Kind::Detach;
      l.major = parse_index(ref.substr(0, comma), line_no);
      l.minor = parse_index(ref.substr(comma + 1), line_no);
    } else {
      throw ProofFormatError("line " + std::to_string(line_no) + ": unknown rule '" + tag + "'");
    }
    p.lines.push_back(std::move(l));
  }
  if (p.lines.empty()) throw ProofFormatError("empty proof");
  p.goal_line = p.lines.size();
  return p;
}

ProofCheck check_proof(const Theory& t, const Proof& p) {
  auto bad = [](std::size_t line, std::string reason) { return ProofCheck{false, line, std::move(reason)}; };
  if (p.lines.empty()) return bad(0, "proof has no lines");
  for (std::size_t k = 0; k < p.lines.size(); ++k) {
    const ProofLine& l = p.lines[k];
    std::size_t n = k + 1;
    if (l.kind == ProofLine::Kind::Axiom) {
      const AxiomSchema* s = t.find_schema(l.schema_id);
      if (!s) return bad(n, "no schema '" + l.schema_id + "' in theory " + t.name);
      if (!is_instance_of(l.formula, s->body)) return bad(n, "not an instance of " + l.schema_id);
      continue;
    }
    if (l.major == 0 || l.minor == 0 || l.major >= n || l.minor >= n)
      return bad(n, "cites a line that does not precede it");
    auto result = condensed_detach(p.lines[l.major - 1].formula, p.lines[l.minor - 1].formula);
    if (auto* err = std::get_if<DetachError>(&result))
      return bad(n, *err == DetachError::NotImplication ? "major premise is not an implication"
                                                        : "premises do not unify");
    if (!is_variant(std::get<Formula>(result), l.formula))
      return bad(n, "conclusion differs from condensed detachment result " + print(std::get<Formula>(result)));
  }
  if (p.goal_line == 0 || p.goal_line > p.lines.size()) return bad(p.goal_line, "goal line out of range");
  return {};
}

bool proves(const Proof& p, const Formula& goal) {
  if (p.goal_line == 0 || p.goal_line > p.lines.size()) return false;
  return is_instance_of(goal, p.conclusion());
}

}  // namespace paralab
