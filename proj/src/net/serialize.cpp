#include "dynevo/net/serialize.hpp"

#include <fmt/format.h>

#include <map>

namespace dynevo::net {

namespace {
constexpr std::string_view kMagic = "DYNEVO";
}

// Friend of DynamicNet: rebuilds a genome field by field.
class GenomeCodec {
 public:
  static std::vector<std::uint8_t> encode(const DynamicNet& net) {
    io::ByteWriter w;
    w.tag(kMagic);
    w.u32(kGenomeFormatVersion);
    w.u32(static_cast<std::uint32_t>(net.d_input_));
    w.u32(static_cast<std::uint32_t>(net.d_output_));
    w.u32(static_cast<std::uint32_t>(net.layer_count_));
    w.u8(net.frozen_ ? 1 : 0);
    w.u32(net.next_id_);
    w.u32(static_cast<std::uint32_t>(net.nodes_.size()));
    for (const auto& n : net.nodes_) {
      w.u32(to_index(n.id));
      w.u8(static_cast<std::uint8_t>(n.kind));
      w.u32(static_cast<std::uint32_t>(n.layer));
      w.f64(n.bias);
    }
    w.u32(static_cast<std::uint32_t>(net.connections_.size()));
    for (const auto& c : net.connections_) {
      w.u32(to_index(c.src));
      w.u32(to_index(c.dst));
      w.f64(c.weight);
    }
    w.u32(io::crc32(w.bytes()));
    return std::move(w).take();
  }

  static DynamicNet decode(std::span<const std::uint8_t> bytes) {
    constexpr std::string_view what = "genome";
    if (bytes.size() < 4) throw io::DecodeError("genome: truncated input");
    io::ByteReader r(bytes);
    r.expect_tag(kMagic, what);
    const auto version = r.u32(what);
    if (version != kGenomeFormatVersion)
      throw io::DecodeError(fmt::format("genome: unsupported format version {} (expected {})",
                                        version, kGenomeFormatVersion));
    DynamicNet net;
    net.d_input_ = static_cast<int>(r.u32(what));
    net.d_output_ = static_cast<int>(r.u32(what));
    net.layer_count_ = static_cast<int>(r.u32(what));
    const auto frozen = r.u8(what);
    if (frozen > 1) throw io::DecodeError("genome: bad frozen flag");
    net.frozen_ = frozen == 1;
    net.next_id_ = r.u32(what);

    const auto node_count = r.u32(what);
    if (node_count > r.remaining() / 17) throw io::DecodeError("genome: truncated input");
    net.nodes_.reserve(node_count);
    for (std::uint32_t i = 0; i < node_count; ++i) {
      Node n;
      n.id = NodeId{r.u32(what)};
      const auto kind = r.u8(what);
      if (kind > 2) throw io::DecodeError("genome: bad node kind");
      n.kind = static_cast<NodeKind>(kind);
      n.layer = static_cast<int>(r.u32(what));
      n.bias = r.f64(what);
      if (!net.nodes_.empty() && !(net.nodes_.back().id < n.id))
        throw io::DecodeError("genome: node ids not ascending");
      net.nodes_.push_back(std::move(n));
    }
    const auto conn_count = r.u32(what);
    if (conn_count > r.remaining() / 16) throw io::DecodeError("genome: truncated input");
    for (std::uint32_t i = 0; i < conn_count; ++i) {
      const NodeId src{r.u32(what)};
      const NodeId dst{r.u32(what)};
      const double weight = r.f64(what);
      if (!net.find(src) || !net.find(dst))
        throw io::DecodeError("genome: connection references a missing node");
      if (net.find(dst)->kind == NodeKind::Input || net.has_connection(src, dst))
        throw io::DecodeError("genome: invalid connection");
      net.add_connection(src, dst, weight);
    }
    const std::size_t body = r.position();
    const auto crc = r.u32(what);
    if (r.remaining() != 0) throw io::DecodeError("genome: trailing bytes");
    if (crc != io::crc32(bytes.first(body))) throw io::DecodeError("genome: checksum mismatch");
    if (const auto errs = check_invariants(net); !errs.empty())
      throw io::DecodeError("genome: invalid structure: " + errs.front());
    return net;
  }
};

std::vector<std::uint8_t> serialize(const DynamicNet& net) { return GenomeCodec::encode(net); }

DynamicNet deserialize(std::span<const std::uint8_t> bytes) { return GenomeCodec::decode(bytes); }

void write_genome(io::ByteWriter& w, const DynamicNet& net) { w.blob(serialize(net)); }

DynamicNet read_genome(io::ByteReader& r) { return deserialize(r.blob("genome")); }

std::string to_dot(const DynamicNet& net, std::string_view graph_name) {
  std::map<int, std::vector<const Node*>> layers;
  for (const auto& n : net.nodes()) layers[n.layer].push_back(&n);

  auto label = [&](const Node& n) {
    switch (n.kind) {
      case NodeKind::Input: return fmt::format("in{}", to_index(n.id));
      case NodeKind::Output: return fmt::format("out{}", to_index(n.id));
      case NodeKind::Hidden: return fmt::format("h{}", to_index(n.id));
    }
    return std::string{};
  };

  std::string out = fmt::format("digraph {} {{\n  rankdir=LR;\n  node [shape=circle];\n", graph_name);
  for (const auto& [layer, members] : layers) {
    out += fmt::format("  subgraph layer_{} {{\n    rank=same;\n", layer);
    for (const Node* n : members) {
      const char* shape = n->kind == NodeKind::Input    ? "box"
                          : n->kind == NodeKind::Output ? "doublecircle"
                                                        : "circle";
      if (n->kind == NodeKind::Input)
        out += fmt::format("    n{} [label=\"{}\", shape={}];\n", to_index(n->id), label(*n), shape);
      else
        out += fmt::format("    n{} [label=\"{}\\nb={:.3g}\", shape={}];\n", to_index(n->id),
                           label(*n), n->bias, shape);
    }
    out += "  }\n";
  }
  for (const auto& c : net.connections()) {
    const bool recurrent = net.node(c.src).layer >= net.node(c.dst).layer;
    out += fmt::format("  n{} -> n{} [label=\"{:.3g}\"{}];\n", to_index(c.src), to_index(c.dst),
                       c.weight, recurrent ? ", style=dashed" : "");
  }
  out += "}\n";
  return out;
}

}  // namespace dynevo::net
