#include "dwlab/serialize.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "dwlab/errors.hpp"

namespace dwlab {

using nlohmann::json;

std::optional<GraphFormat> graph_format_from_name(std::string_view s) {
  if (s == "json") return GraphFormat::Json;
  if (s == "dot") return GraphFormat::Dot;
  if (s == "edgelist") return GraphFormat::EdgeList;
  return std::nullopt;
}

json graph_to_json(const Digraph& g) {
  json vs = json::array();
  for (int v = 0; v < g.size(); ++v) {
    json jv = {{"id", v}, {"name", g.name(v)}};
    if (const auto& r = g.role(v)) {
      json jr = {{"level", r->level}, {"part", std::string(part_name(r->part))}, {"index", r->index}};
      if (r->part == Part::FClause) jr["literal"] = r->literal;
      jv["role"] = jr;
    }
    vs.push_back(jv);
  }
  json es = json::array();
  for (auto [u, v] : g.edges()) es.push_back(json::array({u, v}));
  return json{{"vertices", vs}, {"edges", es}};
}

Digraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw ParseError("graph JSON needs \"vertices\" and \"edges\"", 0);
  const json& vs = j.at("vertices");
  const json& es = j.at("edges");
  if (!vs.is_array() || !es.is_array()) throw ParseError("\"vertices\"/\"edges\" must be arrays", 0);
  Digraph g;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const json& jv = vs[i];
    if (!jv.is_object() || !jv.contains("id") || !jv["id"].is_number_integer() ||
        jv["id"].get<int>() != static_cast<int>(i))
      throw ParseError("vertex " + std::to_string(i) + " must carry \"id\": " + std::to_string(i), 0);
    std::string name = jv.value("name", std::to_string(i));
    std::optional<RoleTag> role;
    if (jv.contains("role")) {
      const json& jr = jv["role"];
      auto part = part_from_name(jr.value("part", ""));
      if (!part) throw ParseError("vertex " + std::to_string(i) + " has unknown role part", 0);
      role = RoleTag{jr.value("level", 0), *part, jr.value("index", 0), jr.value("literal", 0)};
    }
    g.add_vertex(std::move(name), role);
  }
  for (const json& e : es) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ParseError("edge must be a pair of vertex ids", 0);
    int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 0 || v < 0 || u >= g.size() || v >= g.size())
      throw ParseError("edge references unknown vertex", 0);
    if (u == v) throw ParseError("self-loop on vertex " + std::to_string(u), 0);
    if (!g.add_edge(u, v)) throw ParseError("duplicate edge", 0);
  }
  return g;
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string dot_color(Part p) {
  switch (p) {
    case Part::M: return "lightblue";
    case Part::D: return "steelblue";
    case Part::A: return "orange";
    case Part::B: return "red";
    case Part::C: return "palegreen";
    case Part::c: return "darkgreen";
    case Part::Base: return "gray";
    case Part::FHub: return "purple";
    case Part::FClause: return "plum";
  }
  return "white";
}

// Name-interning builder shared by the edge-list and DOT readers.
struct NamedBuilder {
  Digraph g;
  std::map<std::string, VertexId> ids;
  VertexId get(const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    VertexId v = g.add_vertex(name);
    ids.emplace(name, v);
    return v;
  }
  void edge(const std::string& a, const std::string& b, std::size_t offset) {
    VertexId u = get(a), v = get(b);
    if (u == v) throw ParseError("self-loop on " + a, offset);
    if (!g.add_edge(u, v)) throw ParseError("duplicate edge " + a + " " + b, offset);
  }
};

Digraph decode_edgelist(std::string_view s) {
  NamedBuilder b;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find('\n', pos);
    if (end == std::string_view::npos) end = s.size();
    std::string line(s.substr(pos, end - pos));
    std::istringstream is(line);
    std::vector<std::string> tok;
    for (std::string t; is >> t;) tok.push_back(t);
    if (!tok.empty() && tok[0][0] != '#') {
      if (tok.size() == 1)
        b.get(tok[0]);
      else if (tok.size() == 2)
        b.edge(tok[0], tok[1], pos);
      else
        throw ParseError("edge-list line must hold one or two names", pos);
    }
    pos = end + 1;
  }
  return std::move(b.g);
}

// Reads the subset of DOT that encode() writes: quoted or bare identifiers,
// node statements with optional [attributes] and "a" -> "b" edge statements.
class DotReader {
 public:
  explicit DotReader(std::string_view s) : s_(s) {}

  Digraph read() {
    skip();
    expect_word("digraph");
    skip();
    if (peek() != '{') ident();
    skip();
    expect('{');
    NamedBuilder b;
    for (;;) {
      skip();
      if (peek() == '}') break;
      if (pos_ >= s_.size()) throw ParseError("unterminated digraph body", pos_);
      std::size_t at = pos_;
      std::string a = ident();
      skip();
      if (s_.compare(pos_, 2, "->") == 0) {
        pos_ += 2;
        skip();
        std::string c = ident();
        b.edge(a, c, at);
      } else {
        b.get(a);
      }
      skip();
      if (peek() == '[') attributes();
      skip();
      if (peek() == ';') ++pos_;
    }
    return std::move(b.g);
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  void expect_word(std::string_view w) {
    if (s_.compare(pos_, w.size(), w) != 0) throw ParseError("expected '" + std::string(w) + "'", pos_);
    pos_ += w.size();
  }
  std::string ident() {
    std::string out;
    if (peek() == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      expect('"');
      return out;
    }
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
      out += s_[pos_++];
    if (out.empty()) throw ParseError("expected identifier", pos_);
    return out;
  }
  void attributes() {
    expect('[');
    bool quoted = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') quoted = !quoted;
      if (c == ']' && !quoted) return;
    }
    throw ParseError("unterminated attribute list", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode(const Digraph& g, GraphFormat format) {
  std::ostringstream os;
  switch (format) {
    case GraphFormat::Json:
      return graph_to_json(g).dump();
    case GraphFormat::EdgeList: {
      VertexSet touched;
      for (auto [u, v] : g.edges()) {
        touched.insert(u);
        touched.insert(v);
      }
      bool first = true;
      auto line = [&](const std::string& l) {
        if (!first) os << '\n';
        first = false;
        os << l;
      };
      for (int v = 0; v < g.size(); ++v)
        if (!touched.contains(v)) line(g.name(v));
      for (auto [u, v] : g.edges()) line(g.name(u) + " " + g.name(v));
      return os.str();
    }
    case GraphFormat::Dot: {
      os << "digraph G {\n";
      for (int v = 0; v < g.size(); ++v) {
        os << "  " << dot_quote(g.name(v));
        if (const auto& r = g.role(v))
          os << " [style=filled, fillcolor=" << dot_color(r->part) << ", comment=\"level " << r->level << ' '
             << part_name(r->part) << ' ' << r->index << "\"]";
        os << ";\n";
      }
      for (auto [u, v] : g.edges()) os << "  " << dot_quote(g.name(u)) << " -> " << dot_quote(g.name(v)) << ";\n";
      os << "}\n";
      return os.str();
    }
  }
  return {};
}

Digraph decode(std::string_view payload, GraphFormat format) {
  switch (format) {
    case GraphFormat::Json: {
      json j;
      try {
        j = json::parse(payload);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
      }
      return graph_from_json(j);
    }
    case GraphFormat::EdgeList:
      return decode_edgelist(payload);
    case GraphFormat::Dot:
      return DotReader(payload).read();
  }
  return {};
}

json set_to_json(const VertexSet& s) { return s.to_vector(); }

VertexSet set_from_json(const json& j, const Digraph& g) {
  if (!j.is_array()) throw ParseError("vertex set must be an array", 0);
  VertexSet s;
  for (const json& x : j) {
    VertexId v;
    if (x.is_number_integer()) {
      v = x.get<int>();
    } else if (x.is_string()) {
      auto f = g.find(x.get<std::string>());
      if (!f) throw InputError("unknown vertex name " + x.get<std::string>());
      v = *f;
    } else {
      throw ParseError("vertex must be an id or a name", 0);
    }
    g.check_vertex(v);
    s.insert(v);
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << data;
}

}  // namespace dwlab
