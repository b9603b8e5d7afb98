// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include "bdc/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace bdc {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream ss{std::string(raw)};
    Line ln{lineno, {}};
    for (std::string tok; ss >> tok;) ln.tokens.push_back(tok);
    if (!ln.tokens.empty()) out.push_back(std::move(ln));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return next_ >= lines_.size(); }
  const Line& peek() const { return lines_[next_]; }
  const Line& take() {
    if (done()) throw ParseError(last_line(), "unexpected end of input");
    return lines_[next_++];
  }
  std::size_t last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

  // Consumes the keyword line of a section. Returns false if the section is
  // absent, which is allowed only when it carries no data.
  bool section(const std::string& name, bool can_omit) {
    if (!done() && peek().tokens.size() == 1 && peek().tokens[0] == name) {
      ++next_;
      return true;
    }
    if (can_omit) return false;
    std::size_t ln = done() ? last_line() : peek().number;
    throw ParseError(ln, "expected section '" + name + "'");
  }

  RVec numbers(const Line& ln, std::size_t expected, const std::string& what) {
    RVec out;
    if (ln.tokens.size() == 1 && ln.tokens[0] == "-") {
      if (expected != 0)
        throw ParseError(ln.number, what + ": expected " + std::to_string(expected) + " entries");
      return out;
    }
    if (ln.tokens.size() != expected)
      throw ParseError(ln.number, what + ": expected " + std::to_string(expected) +
                                      " entries, got " + std::to_string(ln.tokens.size()));
    for (const auto& t : ln.tokens) {
      if (t.find("inf") != std::string::npos || t.find("Inf") != std::string::npos)
        throw ParseError(ln.number, what + ": unbounded variable or infinite entry");
      try {
        out.push_back(parse_rational(t));
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln.number, what + ": " + e.what());
      }
    }
    return out;
  }

  RVec vector_section(const std::string& name, std::size_t len) {
    if (!section(name, len == 0)) return {};
    if (len == 0 && !done() && peek().tokens.size() == 1 && peek().tokens[0] == "-") ++next_;
    if (len == 0) return {};
    return numbers(take(), len, name);
  }

  RMat matrix_section(const std::string& name, std::size_t rows, std::size_t cols) {
    RMat m(rows, cols);
    if (!section(name, rows == 0)) return m;
    if (rows == 0) {
      if (!done() && peek().tokens.size() == 1 && peek().tokens[0] == "-") ++next_;
      return m;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      RVec r = numbers(take(), cols, name + " row " + std::to_string(i));
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = std::move(r[j]);
    }
    return m;
  }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

std::size_t to_count(const Line& ln, std::size_t i) {
  const std::string& t = ln.tokens[i];
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(ln.number, "bad dimension '" + t + "'");
  return std::stoul(t);
}

std::vector<long> integer_bounds(const RVec& v, std::size_t line, const char* name) {
  std::vector<long> out;
  for (const auto& q : v) {
    if (!is_integer(q)) throw ParseError(line, std::string(name) + ": bounds must be integers");
    if (!q.get_num().fits_slong_p()) throw ParseError(line, std::string(name) + ": bound overflow");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

void put_vector(std::ostringstream& os, const char* name, const RVec& v) {
  if (v.empty()) return;
  os << name << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << format_rational(v[i]);
  os << '\n';
}

void put_matrix(std::ostringstream& os, const char* name, const RMat& m) {
  if (m.rows == 0) return;
  os << name << '\n';
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (m.cols == 0) os << '-';
    for (std::size_t j = 0; j < m.cols; ++j) os << (j ? " " : "") << format_rational(m(i, j));
    os << '\n';
  }
}

}  // namespace

BilevelInstance parse_instance(std::string_view text) {
  Reader rd(tokenize(text));
  const Line& head = rd.take();
  if (head.tokens.size() != 2 || head.tokens[0] != "bilevel" || head.tokens[1] != "1")
    throw ParseError(head.number, "expected header 'bilevel 1'");
  const Line& dims = rd.take();
  if (dims.tokens.size() != 8 || dims.tokens[0] != "dims")
    throw ParseError(dims.number, "expected 'dims n1 n2 m1 mt1 m2 nY n3'");
  BilevelInstance inst;
  inst.n1 = to_count(dims, 1);
  inst.n2 = to_count(dims, 2);
  const std::size_t m1 = to_count(dims, 3), mt1 = to_count(dims, 4), m2 = to_count(dims, 5),
                    ny = to_count(dims, 6), n3 = to_count(dims, 7);
  const std::size_t n = inst.n1 + inst.n2;

  inst.c = rd.vector_section("c", inst.n1);
  inst.d = rd.vector_section("d", inst.n2);
  inst.M = rd.matrix_section("M", m1, inst.n1);
  inst.N = rd.matrix_section("N", m1, inst.n2);
  inst.h = rd.vector_section("h", m1);
  inst.Mt = rd.matrix_section("Mt", mt1, inst.n1);
  inst.Nt = rd.matrix_section("Nt", mt1, inst.n2);
  inst.ht = rd.vector_section("ht", mt1);
  if (rd.section("cones", mt1 == 0)) {
    const Line& ln = rd.take();
    if (!(ln.tokens.size() == 1 && ln.tokens[0] == "-")) {
      for (std::size_t i = 0; i < ln.tokens.size(); ++i) inst.cones.push_back(to_count(ln, i));
    }
  }
  inst.A = rd.matrix_section("A", m2, inst.n1);
  inst.B = rd.matrix_section("B", m2, inst.n2);
  inst.f = rd.vector_section("f", m2);
  inst.V = rd.matrix_section("V", n3, inst.n2);
  inst.g = rd.vector_section("g", inst.n2);
  inst.CY = rd.matrix_section("CY", ny, inst.n2);
  inst.UY = rd.vector_section("UY", ny);
  std::size_t lb_line = rd.done() ? rd.last_line() : rd.peek().number;
  if (n == 0) {
    rd.vector_section("lb", 0);
    rd.vector_section("ub", 0);
  } else {
    if (!rd.section("lb", false)) throw ParseError(lb_line, "missing lb");
    const Line& lbl = rd.take();
    RVec lbv = rd.numbers(lbl, n, "lb");
    inst.lb = integer_bounds(lbv, lbl.number, "lb");
    if (!rd.section("ub", false)) throw ParseError(lbl.number, "missing ub");
    const Line& ubl = rd.take();
    RVec ubv = rd.numbers(ubl, n, "ub");
    inst.ub = integer_bounds(ubv, ubl.number, "ub");
  }
  if (!rd.done()) throw ParseError(rd.peek().number, "trailing content '" + rd.peek().tokens[0] + "'");
  try {
    inst.validate();
  } catch (const ValidationError& e) {
    throw ParseError(rd.last_line(), e.what());
  }
  return inst;
}

std::string write_instance(const BilevelInstance& inst) {
  std::ostringstream os;
  os << "bilevel 1\n";
  os << "dims " << inst.n1 << ' ' << inst.n2 << ' ' << inst.m1() << ' ' << inst.mt1() << ' '
     << inst.m2() << ' ' << inst.nY() << ' ' << inst.n3() << '\n';
  put_vector(os, "c", inst.c);
  put_vector(os, "d", inst.d);
  put_matrix(os, "M", inst.M);
  put_matrix(os, "N", inst.N);
  put_vector(os, "h", inst.h);
  put_matrix(os, "Mt", inst.Mt);
  put_matrix(os, "Nt", inst.Nt);
  put_vector(os, "ht", inst.ht);
  if (!inst.cones.empty()) {
    os << "cones\n";
    for (std::size_t i = 0; i < inst.cones.size(); ++i) os << (i ? " " : "") << inst.cones[i];
    os << '\n';
  }
  put_matrix(os, "A", inst.A);
  put_matrix(os, "B", inst.B);
  put_vector(os, "f", inst.f);
  put_matrix(os, "V", inst.V);
  put_vector(os, "g", inst.g);
  put_matrix(os, "CY", inst.CY);
  put_vector(os, "UY", inst.UY);
  if (inst.n() > 0) {
    os << "lb\n";
    for (std::size_t i = 0; i < inst.lb.size(); ++i) os << (i ? " " : "") << inst.lb[i];
    os << "\nub\n";
    for (std::size_t i = 0; i < inst.ub.size(); ++i) os << (i ? " " : "") << inst.ub[i];
    os << '\n';
  }
  return os.str();
}

BilevelInstance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void write_instance_file(const BilevelInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << write_instance(inst);
}

std::string write_solution(const SolutionRecord& sol) {
  std::ostringstream os;
  os << "status " << to_string(sol.status) << '\n';
  os << "objective " << (sol.objective ? format_rational(*sol.objective) : std::string("none"))
     << '\n';
  os << 'x';
  for (long v : sol.x) os << ' ' << v;
  os << "\ny";
  for (long v : sol.y) os << ' ' << v;
  os << '\n';
  return os.str();
}

SolutionRecord parse_solution(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.size() != 4) throw ParseError(lines.empty() ? 0 : lines.back().number, "expected 4 lines");
  SolutionRecord sol;
  const auto& st = lines[0];
  if (st.tokens.size() != 2 || st.tokens[0] != "status") throw ParseError(st.number, "expected status");
  bool found = false;
  for (RunStatus s : {RunStatus::kOptimal, RunStatus::kFeasible, RunStatus::kInfeasible,
                      RunStatus::kUnknown, RunStatus::kTimeLimit}) {
    if (to_string(s) == st.tokens[1]) {
      sol.status = s;
      found = true;
    }
  }
  if (!found) throw ParseError(st.number, "unknown status '" + st.tokens[1] + "'");
  const auto& ob = lines[1];
  if (ob.tokens.size() != 2 || ob.tokens[0] != "objective")
    throw ParseError(ob.number, "expected objective");
  if (ob.tokens[1] != "none") {
    try {
      sol.objective = parse_rational(ob.tokens[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ob.number, e.what());
    }
  }
  auto vec = [](const Line& ln, const char* key) {
    if (ln.tokens.empty() || ln.tokens[0] != key)
      throw ParseError(ln.number, std::string("expected ") + key);
    std::vector<long> v;
    for (std::size_t i = 1; i < ln.tokens.size(); ++i) {
      try {
        v.push_back(std::stol(ln.tokens[i]));
      } catch (const std::exception&) {
        throw ParseError(ln.number, "bad integer '" + ln.tokens[i] + "'");
      }
    }
    return v;
  };
  sol.x = vec(lines[2], "x");
  sol.y = vec(lines[3], "y");
  return sol;
}

}  // namespace bdc
