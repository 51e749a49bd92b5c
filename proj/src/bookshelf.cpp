#include "fftpl/bookshelf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fftpl {

namespace {

namespace fs = std::filesystem;

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && p == last;
}

class BookshelfFile {
 public:
  explicit BookshelfFile(const fs::path& path) : path_(path.string()) {
    std::ifstream in(path);
    if (!in) throw ParseError(path_ + ": cannot open file");
    std::string line;
    while (std::getline(in, line)) lines_.push_back(std::move(line));
  }

  // next non-comment, non-blank line split on whitespace, ':' dropped
  bool next(std::vector<std::string>& tokens) {
    while (cursor_ < lines_.size()) {
      const std::string& raw = lines_[cursor_++];
      tokens.clear();
      std::string tok;
      bool comment = false;
      for (char c : raw) {
        if (c == '#') {
          comment = true;
          break;
        }
        if (std::isspace(static_cast<unsigned char>(c)) || c == ':') {
          if (!tok.empty()) tokens.push_back(std::move(tok)), tok.clear();
        } else {
          tok.push_back(c);
        }
      }
      (void)comment;
      if (!tok.empty()) tokens.push_back(std::move(tok));
      if (!tokens.empty()) return true;
    }
    return false;
  }

  void expect_header(const std::string& type) {
    std::vector<std::string> t;
    if (!next(t) || t.size() < 2 || t[0] != "UCLA" || t[1] != type)
      fail("expected header 'UCLA " + type + " 1.0'");
  }

  double number(const std::string& tok) {
    double v;
    if (!parse_double(tok, v)) fail("expected a number, got '" + tok + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(path_ + ":" + std::to_string(cursor_) + ": " + msg);
  }

  const std::string& name() const { return path_; }

 private:
  std::string path_;
  std::vector<std::string> lines_;
  std::size_t cursor_ = 0;
};

struct RawNode {
  std::string name;
  double width = 0.0, height = 0.0;
  bool fixed = false;
  bool placed = false;
  Point corner;  // lower-left from .pl
};

long long find_count(BookshelfFile& f, const std::string& key,
                     std::vector<std::string>& t) {
  // key and value already tokenized as [key, value]
  if (t.size() >= 2 && t[0] == key) return static_cast<long long>(f.number(t[1]));
  f.fail("expected '" + key + " : <count>'");
}

void parse_nodes(const fs::path& path, std::vector<RawNode>& out) {
  BookshelfFile f(path);
  f.expect_header("nodes");
  std::vector<std::string> t;
  if (!f.next(t)) f.fail("missing NumNodes");
  long long num_nodes = find_count(f, "NumNodes", t);
  if (!f.next(t)) f.fail("missing NumTerminals");
  long long num_terminals = find_count(f, "NumTerminals", t);

  long long terminals_seen = 0;
  while (f.next(t)) {
    if (t.size() < 3) f.fail("node entry needs 'name width height'");
    RawNode n;
    n.name = t[0];
    n.width = f.number(t[1]);
    n.height = f.number(t[2]);
    if (t.size() > 3) {
      if (t[3].rfind("terminal", 0) == 0) {  // terminal / terminal_NI
        n.fixed = true;
        ++terminals_seen;
      } else {
        f.fail("unexpected token '" + t[3] + "' after node entry");
      }
    }
    if (n.width <= 0.0 || n.height <= 0.0)
      f.fail("node '" + n.name + "' has non-positive dimensions");
    out.push_back(std::move(n));
  }
  if (static_cast<long long>(out.size()) != num_nodes)
    throw ParseError(f.name() + ": declared NumNodes " + std::to_string(num_nodes) +
                     " but found " + std::to_string(out.size()));
  if (terminals_seen != num_terminals)
    throw ParseError(f.name() + ": declared NumTerminals " + std::to_string(num_terminals) +
                     " but found " + std::to_string(terminals_seen));
}

void parse_pl(const fs::path& path, std::unordered_map<std::string, std::size_t>& by_name,
              std::vector<RawNode>& nodes) {
  BookshelfFile f(path);
  f.expect_header("pl");
  std::vector<std::string> t;
  while (f.next(t)) {
    if (t.size() < 3) f.fail("placement entry needs 'name x y'");
    auto it = by_name.find(t[0]);
    if (it == by_name.end()) f.fail("placement for unknown node '" + t[0] + "'");
    RawNode& n = nodes[it->second];
    n.corner.x = f.number(t[1]);
    n.corner.y = f.number(t[2]);
    n.placed = true;
    for (std::size_t i = 3; i < t.size(); ++i)
      if (t[i] == "/FIXED" || t[i] == "/FIXED_NI") n.fixed = true;
  }
}

void parse_scl(const fs::path& path, Region& region) {
  BookshelfFile f(path);
  f.expect_header("scl");
  std::vector<std::string> t;
  if (!f.next(t)) f.fail("missing NumRows");
  long long num_rows = find_count(f, "NumRows", t);

  while (f.next(t)) {
    if (t[0] != "CoreRow") f.fail("expected CoreRow, got '" + t[0] + "'");
    Row row;
    double site_spacing = 1.0;
    long long num_sites = 0;
    bool done = false;
    while (!done && f.next(t)) {
      for (std::size_t i = 0; i < t.size();) {
        const std::string& key = t[i];
        if (key == "End") {
          done = true;
          break;
        }
        auto val = [&](std::size_t k) -> const std::string& {
          if (k >= t.size()) f.fail("missing value after '" + key + "'");
          return t[k];
        };
        if (key == "Coordinate") row.y = f.number(val(i + 1)), i += 2;
        else if (key == "Height") row.height = f.number(val(i + 1)), i += 2;
        else if (key == "Sitespacing") site_spacing = f.number(val(i + 1)), i += 2;
        else if (key == "SubrowOrigin") row.lx = f.number(val(i + 1)), i += 2;
        else if (key == "NumSites")
          num_sites = static_cast<long long>(f.number(val(i + 1))), i += 2;
        else i += 2;  // Sitewidth, Siteorient, Sitesymmetry, ...
      }
    }
    if (!done) f.fail("CoreRow without End");
    row.hx = row.lx + static_cast<double>(num_sites) * site_spacing;
    if (row.height <= 0.0 || row.hx <= row.lx) f.fail("degenerate CoreRow");
    region.rows.push_back(row);
  }
  if (static_cast<long long>(region.rows.size()) != num_rows)
    throw ParseError(f.name() + ": declared NumRows " + std::to_string(num_rows) +
                     " but found " + std::to_string(region.rows.size()));

  region.bbox = region.rows.front().rect();
  for (const Row& r : region.rows) {
    region.bbox.lx = std::min(region.bbox.lx, r.lx);
    region.bbox.hx = std::max(region.bbox.hx, r.hx);
    region.bbox.ly = std::min(region.bbox.ly, r.y);
    region.bbox.hy = std::max(region.bbox.hy, r.y + r.height);
  }
  region.build_dark_rects();
}

void parse_nets(const fs::path& path, const std::unordered_map<std::string, int>& node_id,
                Netlist& nl) {
  BookshelfFile f(path);
  f.expect_header("nets");
  std::vector<std::string> t;
  if (!f.next(t)) f.fail("missing NumNets");
  long long num_nets = find_count(f, "NumNets", t);
  if (!f.next(t)) f.fail("missing NumPins");
  long long num_pins = find_count(f, "NumPins", t);

  while (f.next(t)) {
    if (t[0] != "NetDegree") f.fail("expected NetDegree, got '" + t[0] + "'");
    if (t.size() < 2) f.fail("NetDegree without a count");
    int degree = static_cast<int>(f.number(t[1]));
    if (degree < 1) f.fail("net degree must be >= 1");
    Net net;
    net.id = static_cast<int>(nl.nets.size());
    net.name = t.size() > 2 ? t[2] : ("n" + std::to_string(net.id));
    net.pin_begin = static_cast<int>(nl.pins.size());
    for (int k = 0; k < degree; ++k) {
      if (!f.next(t)) f.fail("net '" + net.name + "' truncated");
      auto it = node_id.find(t[0]);
      if (it == node_id.end()) f.fail("pin references unknown node '" + t[0] + "'");
      Pin pin;
      pin.node_id = it->second;
      pin.net_id = net.id;
      // "name [dir] [dx dy]" -- direction token is non-numeric
      std::size_t i = 1;
      double v;
      if (i < t.size() && !parse_double(t[i], v)) ++i;
      if (i + 1 < t.size()) {
        pin.offset.x = f.number(t[i]);
        pin.offset.y = f.number(t[i + 1]);
      } else if (i < t.size()) {
        f.fail("pin entry has a lone offset coordinate");
      }
      nl.pins.push_back(pin);
    }
    net.pin_end = static_cast<int>(nl.pins.size());
    nl.nets.push_back(std::move(net));
  }
  if (static_cast<long long>(nl.nets.size()) != num_nets)
    throw ParseError(f.name() + ": declared NumNets " + std::to_string(num_nets) +
                     " but found " + std::to_string(nl.nets.size()));
  if (static_cast<long long>(nl.pins.size()) != num_pins)
    throw ParseError(f.name() + ": declared NumPins " + std::to_string(num_pins) +
                     " but found " + std::to_string(nl.pins.size()));
}

void parse_wts(const fs::path& path) {
  // Net weights are parsed for manifest completeness but fixed to 1.0.
  BookshelfFile f(path);
  std::vector<std::string> t;
  while (f.next(t)) {
  }
}

std::string format_coord(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

ParsedDesign parse_bookshelf(const std::string& aux_path) {
  fs::path aux(aux_path);
  BookshelfFile f(aux);
  std::vector<std::string> t;
  if (!f.next(t) || t.size() < 2) f.fail("empty .aux manifest");

  fs::path dir = aux.parent_path();
  fs::path nodes_path, nets_path, wts_path, pl_path, scl_path;
  for (std::size_t i = 1; i < t.size(); ++i) {
    fs::path p = dir / t[i];
    std::string ext = p.extension().string();
    if (ext == ".nodes") nodes_path = p;
    else if (ext == ".nets") nets_path = p;
    else if (ext == ".wts") wts_path = p;
    else if (ext == ".pl") pl_path = p;
    else if (ext == ".scl") scl_path = p;
  }
  for (auto* [p, what] : std::initializer_list<std::pair<fs::path*, const char*>>{
           {&nodes_path, ".nodes"}, {&nets_path, ".nets"}, {&pl_path, ".pl"},
           {&scl_path, ".scl"}}) {
    if (p->empty()) f.fail(std::string("manifest lists no ") + what + " file");
    if (!fs::exists(*p)) f.fail("missing file '" + p->string() + "'");
  }

  std::vector<RawNode> raw;
  parse_nodes(nodes_path, raw);
  std::unordered_map<std::string, std::size_t> raw_by_name;
  raw_by_name.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw_by_name.emplace(raw[i].name, i).second)
      throw ParseError(nodes_path.string() + ": duplicate node '" + raw[i].name + "'");
  }
  parse_pl(pl_path, raw_by_name, raw);

  ParsedDesign out;
  parse_scl(scl_path, out.region);

  // movable first, then fixed, both in file order
  Netlist& nl = out.netlist;
  std::unordered_map<std::string, int> node_id;
  node_id.reserve(raw.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (const RawNode& rn : raw) {
      if (rn.fixed != (pass == 1)) continue;
      if (!rn.placed)
        throw ParseError(pl_path.string() + ": no placement entry for node '" + rn.name + "'");
      Node n;
      n.id = static_cast<int>(nl.nodes.size());
      n.kind = rn.fixed ? NodeKind::Fixed : NodeKind::Movable;
      n.width = rn.width;
      n.height = rn.height;
      n.center = {rn.corner.x + 0.5 * rn.width, rn.corner.y + 0.5 * rn.height};
      n.name = rn.name;
      node_id.emplace(n.name, n.id);
      nl.nodes.push_back(std::move(n));
      (pass == 0 ? nl.movable_count : nl.fixed_count) += 1;
    }
  }

  parse_nets(nets_path, node_id, nl);
  if (!wts_path.empty() && fs::exists(wts_path)) parse_wts(wts_path);

  nl.add_dark_nodes(out.region);
  nl.finalize();
  out.placement = nl.initial_placement();
  return out;
}

void write_pl(const PlacementState& placement, const Netlist& netlist,
              const std::string& path) {
  if (!placement.finite()) throw std::invalid_argument("write_pl: non-finite placement");
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("write_pl: cannot open '" + path + "'");
  outf << "UCLA pl 1.0\n\n";
  for (const Node& n : netlist.nodes) {
    if (n.kind == NodeKind::Filler || n.kind == NodeKind::Dark) continue;
    Point c = n.center;
    if (n.kind == NodeKind::Movable) {
      int slot = netlist.slot_of(n.id);
      c = {placement.x[slot], placement.y[slot]};
    }
    outf << n.name << ' ' << format_coord(c.x - 0.5 * n.width) << ' '
         << format_coord(c.y - 0.5 * n.height) << " : N";
    if (n.kind == NodeKind::Fixed) outf << " /FIXED";
    outf << '\n';
  }
  if (!outf) throw std::runtime_error("write_pl: write failed for '" + path + "'");
}

}  // namespace fftpl
