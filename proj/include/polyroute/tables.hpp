#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "polyroute/compact_routing.hpp"

namespace polyroute {

enum class EntryKind : std::uint8_t {
    ToMyRep = 0,
    RepToMember = 1,
    RepToRepSamePatch = 2,
    Global = 3,
    MarkedRelay = 4,
};

const char* entry_kind_name(EntryKind k);

/// Where a leg of the route ends: a vertex, or a Steiner relay reached at
/// either of its marked vertices.
struct PseudoTarget {
    enum class Kind : std::uint8_t { Vertex = 0, Steiner = 1 };

    Kind kind = Kind::Vertex;
    std::uint32_t id = kNone;  // vertex id or spanner node id
    std::array<VertexId, 2> marked{kNone, kNone};
    Point3 point{};

    static PseudoTarget vertex(VertexId v, const Point3& at) { return {Kind::Vertex, v, {v, kNone}, at}; }
    bool contains(VertexId v) const { return v != kNone && (marked[0] == v || marked[1] == v); }
    bool operator==(const PseudoTarget&) const = default;
};

/// dest and via are vertex ids for the three local kinds and spanner node ids
/// for Global and MarkedRelay.
struct RoutingEntry {
    EntryKind kind = EntryKind::ToMyRep;
    std::uint32_t dest = kNone;
    std::uint32_t via = kNone;
    Plane plane;
    PseudoTarget next;

    bool operator==(const RoutingEntry&) const = default;
};

struct NodeLabel {
    VertexId vertex = kNone;
    VertexId rep = kNone;              // representative serving the vertex
    NodeId node = kNone;               // spanner node of that representative
    NodeId landmark = kNone;           // home landmark of `node`
    VertexId landmark_vertex = kNone;  // kNone when the landmark is a Steiner node
    PatchId patch = kNone;
    CellId cell = kNone;

    bool operator==(const NodeLabel&) const = default;
    /// Bits needed for the label fields given the id ranges.
    std::size_t bits(std::size_t n, std::size_t nodes, std::size_t patches, std::size_t cells) const;
};

/// Forwarding state of one Steiner node, held by each of its marked vertices.
struct RelayTable {
    NodeId steiner = kNone;
    Point3 point{};
    std::array<VertexId, 2> marked{kNone, kNone};
    bool landmark = false;
    std::vector<RoutingEntry> entries;  // MarkedRelay, sorted by dest

    const RoutingEntry* find(NodeId dest) const;
    bool operator==(const RelayTable&) const = default;
};

struct RoutingTable {
    VertexId vertex = kNone;
    NodeLabel label;
    NodeId node = kNone;                                   // own spanner node (representatives)
    bool landmark = false;
    std::vector<RoutingEntry> entries;                     // sorted by (kind, dest)
    std::vector<std::shared_ptr<const RelayTable>> relays; // sorted by Steiner id
    std::vector<std::pair<VertexId, NodeId>> neighbour_map;
    std::vector<std::pair<FaceId, FaceId>> opposite_face_map;

    const RoutingEntry* find(EntryKind kind, std::uint32_t dest) const;
    const RelayTable* relay(NodeId steiner) const;
    bool operator==(const RoutingTable& o) const;
};

struct TableMeta {
    double eps = 0;
    double delta = 0;
    double theta_m = 0;
    double d_hat = 0;
    std::uint64_t seed = 0;
    bool seeded = false;
    std::uint32_t node_count = 0;
    std::uint32_t patch_count = 0;

    bool operator==(const TableMeta&) const = default;
};

/// Everything a router needs: the mesh and one table per vertex.
struct TableSet {
    TableMeta meta;
    TriangulatedPolytope mesh;
    std::vector<RoutingTable> tables;

    bool empty() const { return tables.empty() && mesh.vertex_count() == 0; }
    /// Entries as stored on disk (relay entries count once per marked vertex).
    std::size_t entry_count() const;
    bool operator==(const TableSet& o) const;
};

struct TableInputs {
    const TriangulatedPolytope& mesh;
    const PatchDecomposition& patches;
    const RepresentativeAssignment& assignment;
    const SpannerGraph& spanner;
    const LandmarkScheme& scheme;  // pruned
    const std::vector<std::vector<PlaneHop>>& hops;
    TableMeta meta;
};

TableSet build_tables(const TableInputs& in);

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 12;

std::vector<std::uint8_t> serialize(const TableSet& t);
/// Throws FormatVersionMismatch, ChecksumMismatch, TruncatedStream or ParseError.
TableSet deserialize(const std::vector<std::uint8_t>& bytes);
std::size_t serialized_size(const TableSet& t);

std::string to_json(const TableSet& t, bool pretty = true);

} // namespace polyroute
