#include "monolab/io.hpp"

#include "monolab/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace monolab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) tokens.push_back(tok);
  return tokens;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

Rational parse_rational_at(const std::string& text, std::size_t line_no) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& err) {
    throw ParseError(line_no, err.what());
  }
}

} // namespace

GenSeries parse_series(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  GenSeries out;
  bool have_header = false, have_radius = false;
  const ExponentVector* last_exponent = nullptr;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(strip_comment(line));
    if (tokens.empty()) continue;

    if (!have_header) {
      if (tokens.size() != 3 || tokens[0] != "gps")
        throw ParseError(line_no, "expected header 'gps <m> <n>'");
      try {
        out.sig.m = std::stoul(tokens[1]);
        out.sig.n = std::stoul(tokens[2]);
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed variable counts in header");
      }
      have_header = true;
      continue;
    }
    if (!have_radius) {
      if (tokens[0] != "radius" || tokens.size() != out.sig.total() + 1)
        throw ParseError(line_no, "expected 'radius' with one entry per variable");
      for (std::size_t v = 0; v < out.sig.total(); ++v) {
        const Rational r = parse_rational_at(tokens[v + 1], line_no);
        if (r <= 0) throw ParseError(line_no, "radius entries must be positive");
        out.sig.polyradius.push_back(r);
      }
      have_radius = true;
      continue;
    }

    if (tokens.size() != out.sig.total() + 2 || tokens[1] != ":")
      throw ParseError(line_no, "expected '<coeff> : <e_1> ... <e_{m+n}>'");
    const Rational coeff = parse_rational_at(tokens[0], line_no);
    if (coeff == 0) throw ParseError(line_no, "zero coefficients may not be stored");
    ExponentVector e = ExponentVector::zeros(out.sig.total());
    for (std::size_t v = 0; v < out.sig.total(); ++v) {
      e[v] = parse_rational_at(tokens[v + 2], line_no);
      if (e[v] < 0) throw ParseError(line_no, "exponents must be nonnegative");
      if (v >= out.sig.m && !is_integer(e[v]))
        throw ParseError(line_no, "standard-variable exponents must be integers");
    }
    auto [it, inserted] = out.terms.emplace(e, coeff);
    if (!inserted) throw ParseError(line_no, "duplicate exponent");
    if (last_exponent && !(*last_exponent < it->first))
      throw ParseError(line_no, "terms must appear in canonical exponent order");
    last_exponent = &it->first;
  }
  if (!have_header) throw ParseError(line_no, "missing 'gps' header");
  if (!have_radius) throw ParseError(line_no, "missing 'radius' line");
  out.sig.validate();
  return out;
}

GenSeries parse_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series file: " + path);
  return parse_series(in);
}

std::string serialize_series(const GenSeries& series) {
  std::ostringstream oss;
  oss << "gps " << series.sig.m << " " << series.sig.n << "\n";
  oss << "radius";
  for (const auto& r : series.sig.polyradius) oss << " " << format_rational(r);
  oss << "\n";
  for (const auto& [e, c] : series.terms) {
    oss << format_rational(c) << " :";
    for (const auto& x : e.entries) oss << " " << format_rational(x);
    oss << "\n";
  }
  return oss.str();
}

void write_series_file(const std::string& path, const GenSeries& series) {
  write_text_file(path, serialize_series(series));
}

namespace {

ordered_json sig_to_json(const VariableSignature& sig) {
  ordered_json j;
  j["m"] = sig.m;
  j["n"] = sig.n;
  ordered_json radii = ordered_json::array();
  for (const auto& r : sig.polyradius) radii.push_back(format_rational(r));
  j["radius"] = std::move(radii);
  return j;
}

VariableSignature sig_from_json(const ordered_json& j) {
  VariableSignature sig;
  sig.m = j.at("m").get<std::size_t>();
  sig.n = j.at("n").get<std::size_t>();
  for (const auto& r : j.at("radius"))
    sig.polyradius.push_back(parse_rational(r.get<std::string>()));
  sig.validate();
  return sig;
}

ordered_json terms_to_json(const GenSeries& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& [e, c] : s.terms) {
    ordered_json term = ordered_json::array();
    term.push_back(format_rational(c));
    ordered_json exps = ordered_json::array();
    for (const auto& x : e.entries) exps.push_back(format_rational(x));
    term.push_back(std::move(exps));
    arr.push_back(std::move(term));
  }
  return arr;
}

GenSeries terms_from_json(const ordered_json& arr, const VariableSignature& sig) {
  GenSeries out(sig);
  for (const auto& term : arr) {
    const Rational c = parse_rational(term.at(0).get<std::string>());
    ExponentVector e;
    for (const auto& x : term.at(1))
      e.entries.push_back(parse_rational(x.get<std::string>()));
    out.accumulate(e, c);
  }
  return out;
}

ordered_json status_to_json(const SeriesStatus& st) {
  ordered_json j;
  switch (st.status.kind) {
    case NormalStatus::Kind::Normal: {
      j["status"] = "normal";
      ordered_json gamma = ordered_json::array();
      for (const auto& x : st.status.decomposition->monomial_exponent.entries)
        gamma.push_back(format_rational(x));
      j["gamma"] = std::move(gamma);
      j["unit"] = terms_to_json(st.status.decomposition->unit);
      break;
    }
    case NormalStatus::Kind::Zero:
      j["status"] = "zero";
      break;
    case NormalStatus::Kind::NotNormal:
      j["status"] = "not-normal";
      break;
  }
  j["snapshot"] = terms_to_json(st.snapshot);
  return j;
}

SeriesStatus status_from_json(const ordered_json& j, const VariableSignature& sig) {
  SeriesStatus st;
  st.snapshot = terms_from_json(j.at("snapshot"), sig);
  const std::string kind = j.at("status").get<std::string>();
  if (kind == "normal") {
    st.status.kind = NormalStatus::Kind::Normal;
    NormalDecomposition nd;
    for (const auto& x : j.at("gamma"))
      nd.monomial_exponent.entries.push_back(parse_rational(x.get<std::string>()));
    nd.unit = terms_from_json(j.at("unit"), sig);
    st.status.decomposition = std::move(nd);
  } else if (kind == "zero") {
    st.status.kind = NormalStatus::Kind::Zero;
  } else if (kind == "not-normal") {
    st.status.kind = NormalStatus::Kind::NotNormal;
  } else {
    throw std::runtime_error("unknown leaf status: " + kind);
  }
  return st;
}

ordered_json node_to_json(const AdmissibleTree& node) {
  ordered_json j;
  if (node.leaf) {
    j["kind"] = "leaf";
    j["sig"] = sig_to_json(node.sig);
    ordered_json series = ordered_json::array();
    for (const auto& st : node.series_status) series.push_back(status_to_json(st));
    j["series"] = std::move(series);
    ordered_json ledger = ordered_json::array();
    for (const auto& entry : node.ledger) {
      ordered_json rec;
      rec["pos"] = entry.chain_pos;
      rec["var"] = entry.critical_index + 1;  // 1-based in files
      rec["status"] = status_to_json(entry.status);
      ledger.push_back(std::move(rec));
    }
    j["ledger"] = std::move(ledger);
    return j;
  }
  if (node.fork == ForkKind::Blowup) {
    j["kind"] = "blowup";
    j["sig"] = sig_to_json(node.sig);
    j["i"] = node.children[0].first.i + 1;
    j["j"] = node.children[0].first.j + 1;
    j["lambda"] = format_rational(node.children[0].first.param);
  } else {
    j["kind"] = "reflection";
    j["sig"] = sig_to_json(node.sig);
    j["i"] = node.children[0].first.i + 1;
  }
  ordered_json children = ordered_json::array();
  for (const auto& [t, child] : node.children) children.push_back(node_to_json(*child));
  j["children"] = std::move(children);
  return j;
}

std::unique_ptr<AdmissibleTree> node_from_json(const ordered_json& j) {
  auto node = std::make_unique<AdmissibleTree>();
  node->sig = sig_from_json(j.at("sig"));
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "leaf") {
    node->leaf = true;
    for (const auto& st : j.at("series"))
      node->series_status.push_back(status_from_json(st, node->sig));
    for (const auto& rec : j.at("ledger")) {
      LedgerEntry entry;
      entry.chain_pos = rec.at("pos").get<std::size_t>();
      entry.critical_index = rec.at("var").get<std::size_t>() - 1;
      entry.status = status_from_json(rec.at("status"), node->sig);
      node->ledger.push_back(std::move(entry));
    }
    return node;
  }
  node->leaf = false;
  std::size_t child_index = 0;
  for (const auto& cj : j.at("children")) {
    ElementaryTransform t;
    if (kind == "blowup") {
      node->fork = ForkKind::Blowup;
      const std::size_t i = j.at("i").get<std::size_t>() - 1;
      const std::size_t jj = j.at("j").get<std::size_t>() - 1;
      const Rational lambda = parse_rational(j.at("lambda").get<std::string>());
      t = child_index == 0 ? ElementaryTransform::blowup_a(node->sig, i, jj, lambda)
                           : ElementaryTransform::blowup_b(node->sig, i, jj, lambda);
    } else if (kind == "reflection") {
      node->fork = ForkKind::Reflection;
      const std::size_t pos = j.at("i").get<std::size_t>() - 1;
      t = ElementaryTransform::reflection(node->sig, pos, child_index == 0);
    } else {
      throw std::runtime_error("unknown tree node kind: " + kind);
    }
    node->children.emplace_back(std::move(t), node_from_json(cj));
    ++child_index;
  }
  return node;
}

} // namespace

std::string serialize_tree(const AdmissibleTree& tree) {
  ordered_json j;
  j["format"] = "qtree";
  j["version"] = 1;
  j["root"] = node_to_json(tree);
  return j.dump(1) + "\n";
}

AdmissibleTree parse_tree(const std::string& text) {
  const auto j = ordered_json::parse(text);
  if (j.at("format") != "qtree") throw std::runtime_error("not a qtree file");
  auto root = node_from_json(j.at("root"));
  return std::move(*root);
}

AdmissibleTree parse_tree_file(const std::string& path) {
  return parse_tree(read_text_file(path));
}

void write_tree_file(const std::string& path, const AdmissibleTree& tree) {
  write_text_file(path, serialize_tree(tree));
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string describe_transform(const ElementaryTransform& t) {
  std::ostringstream oss;
  switch (t.kind) {
    case TransformKind::Ramification:
      oss << "ram(" << t.i + 1 << ";" << format_rational(t.param) << ")";
      break;
    case TransformKind::Translation:
      oss << "trans(" << t.i + 1 << ";" << format_rational(t.param) << ")";
      break;
    case TransformKind::BlowupChartA:
      oss << "blowA(" << t.i + 1 << "," << t.j + 1 << ";" << format_rational(t.param)
          << ")";
      break;
    case TransformKind::BlowupChartB:
      oss << "blowB(" << t.i + 1 << "," << t.j + 1 << ";" << format_rational(t.param)
          << ")";
      break;
    case TransformKind::ReflectionPlus:
      oss << "refl+(" << t.i + 1 << ")";
      break;
    case TransformKind::ReflectionMinus:
      oss << "refl-(" << t.i + 1 << ")";
      break;
    case TransformKind::FaceZero:
      oss << "face(" << t.i + 1 << ")";
      break;
  }
  return oss.str();
}

std::string describe_chain(const TransformChain& chain) {
  if (chain.steps.empty()) return "id";
  std::ostringstream oss;
  for (std::size_t s = 0; s < chain.steps.size(); ++s) {
    if (s > 0) oss << " . ";
    oss << describe_transform(chain.steps[s]);
  }
  return oss.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

} // namespace monolab
