#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynevo/io/bytes.hpp"
#include "dynevo/net/dynamic_net.hpp"

namespace dynevo::net {

inline constexpr std::uint32_t kGenomeFormatVersion = 1;

/// Binary genome encoding, little-endian:
///
///   "DYNEVO" | u32 version | u32 d_input | u32 d_output | u32 layer_count
///   | u8 frozen | u32 next_id
///   | u32 node_count   then per node:       u32 id | u8 kind | u32 layer | f64 bias
///   | u32 conn_count   then per connection: u32 src | u32 dst | f64 weight
///   | u32 crc32 of every preceding byte
///
/// Adjacency lists are rebuilt from the connection order, which is the order
/// they are maintained in.
std::vector<std::uint8_t> serialize(const DynamicNet& net);

/// Throws io::DecodeError on bad magic, version mismatch, truncation, checksum
/// failure or a structurally invalid genome.
DynamicNet deserialize(std::span<const std::uint8_t> bytes);

/// Appends the encoding of `net` to `w` / decodes one genome from `r`.
/// Used by the checkpoint format.
void write_genome(io::ByteWriter& w, const DynamicNet& net);
DynamicNet read_genome(io::ByteReader& r);

/// Graphviz digraph, one `rank=same` cluster per layer, recurrent edges dashed.
std::string to_dot(const DynamicNet& net, std::string_view graph_name = "dynamic_net");

}  // namespace dynevo::net
