#include "polyroute/tables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>

#include <zlib.h>

#include "json.hpp"

namespace polyroute {

static_assert(std::endian::native == std::endian::little, "the table format is little-endian");

const char* entry_kind_name(EntryKind k)
{
    switch (k) {
    case EntryKind::ToMyRep: return "ToMyRep";
    case EntryKind::RepToMember: return "RepToMember";
    case EntryKind::RepToRepSamePatch: return "RepToRepSamePatch";
    case EntryKind::Global: return "Global";
    case EntryKind::MarkedRelay: return "MarkedRelay";
    }
    return "?";
}

std::size_t NodeLabel::bits(std::size_t n, std::size_t nodes, std::size_t patches, std::size_t cells) const
{
    const auto width = [](std::size_t range) { return static_cast<std::size_t>(std::bit_width(std::max<std::size_t>(range, 1))); };
    return 2 * width(n) + 2 * width(nodes) + width(n) + width(patches) + width(cells);
}

const RoutingEntry* RelayTable::find(NodeId dest) const
{
    const auto it = std::lower_bound(entries.begin(), entries.end(), dest,
                                     [](const RoutingEntry& e, NodeId d) { return e.dest < d; });
    return it != entries.end() && it->dest == dest ? &*it : nullptr;
}

const RoutingEntry* RoutingTable::find(EntryKind kind, std::uint32_t dest) const
{
    const auto key = std::make_pair(kind, dest);
    const auto it = std::lower_bound(entries.begin(), entries.end(), key, [](const RoutingEntry& e, const auto& k) {
        return std::make_pair(e.kind, e.dest) < k;
    });
    return it != entries.end() && it->kind == kind && it->dest == dest ? &*it : nullptr;
}

const RelayTable* RoutingTable::relay(NodeId steiner) const
{
    const auto it = std::lower_bound(relays.begin(), relays.end(), steiner,
                                     [](const auto& r, NodeId s) { return r->steiner < s; });
    return it != relays.end() && (*it)->steiner == steiner ? it->get() : nullptr;
}

bool RoutingTable::operator==(const RoutingTable& o) const
{
    if (vertex != o.vertex || !(label == o.label) || node != o.node || landmark != o.landmark ||
        entries != o.entries || neighbour_map != o.neighbour_map || opposite_face_map != o.opposite_face_map ||
        relays.size() != o.relays.size())
        return false;
    for (std::size_t i = 0; i < relays.size(); ++i)
        if (!(*relays[i] == *o.relays[i]))
            return false;
    return true;
}

std::size_t TableSet::entry_count() const
{
    std::size_t n = 0;
    for (const auto& t : tables) {
        n += t.entries.size();
        for (const auto& r : t.relays)
            n += r->entries.size();
    }
    return n;
}

bool TableSet::operator==(const TableSet& o) const
{
    return meta == o.meta && mesh.vertices() == o.mesh.vertices() && mesh.faces() == o.mesh.faces() &&
           tables == o.tables;
}

TableSet build_tables(const TableInputs& in)
{
    const auto& P = in.mesh;
    const auto& a = in.assignment;
    const auto& g = in.spanner;
    const auto& s = in.scheme;

    TableSet out;
    out.meta = in.meta;
    out.meta.node_count = static_cast<std::uint32_t>(g.node_count());
    out.meta.patch_count = static_cast<std::uint32_t>(in.patches.patches.size());
    out.mesh = P;
    out.tables.resize(P.vertex_count());

    const auto target_of = [&](NodeId id) {
        const SpannerNode& n = g.nodes[id];
        if (n.kind == SpannerNode::Kind::Rep)
            return PseudoTarget::vertex(n.vertex, P.vertex(n.vertex));
        return PseudoTarget{PseudoTarget::Kind::Steiner, id, n.marked, n.lifted};
    };
    const auto local_entry = [&](EntryKind kind, VertexId from, VertexId to) {
        const Vec3& n = in.patches.patches[a.patch_of[from]].frame.n;
        return RoutingEntry{kind, to, to, Plane::orthogonal_through(P.vertex(from), P.vertex(to), n),
                            PseudoTarget::vertex(to, P.vertex(to))};
    };
    const auto global_entries = [&](NodeId id, EntryKind kind) {
        std::vector<RoutingEntry> es;
        es.reserve(in.hops[id].size());
        for (const auto& h : in.hops[id])
            es.push_back({kind, h.dest, h.via, h.plane, target_of(h.via)});
        return es;
    };

    for (VertexId v = 0; v < P.vertex_count(); ++v) {
        RoutingTable& t = out.tables[v];
        t.vertex = v;
        const VertexId rep = a.rep_of[v];
        const NodeId rn = g.node_of_vertex[rep];
        const NodeId lm = s.home.empty() ? rn : s.home[rn];
        t.label = {v,
                   rep,
                   rn,
                   lm,
                   g.nodes[lm].kind == SpannerNode::Kind::Rep ? g.nodes[lm].vertex : kNone,
                   a.patch_of[v],
                   a.cell_of[v]};
        for (auto w : P.vertex_ring(v))
            t.neighbour_map.emplace_back(w, g.node_of_vertex[w]);
        for (auto f : P.vertex_fan(v))
            t.opposite_face_map.emplace_back(f, P.opposite_face(f, v));

        if (rep != v) {
            t.entries.push_back(local_entry(EntryKind::ToMyRep, v, rep));
            continue;
        }
        t.node = rn;
        t.landmark = !s.landmark_index.empty() && s.is_landmark(rn);
        for (auto m : a.members[v])
            t.entries.push_back(local_entry(EntryKind::RepToMember, v, m));
        for (auto r2 : a.reps_of_patch[a.patch_of[v]])
            if (r2 != v)
                t.entries.push_back(local_entry(EntryKind::RepToRepSamePatch, v, r2));
        auto ge = global_entries(rn, EntryKind::Global);
        t.entries.insert(t.entries.end(), ge.begin(), ge.end());
        std::sort(t.entries.begin(), t.entries.end(), [](const RoutingEntry& x, const RoutingEntry& y) {
            return std::make_pair(x.kind, x.dest) < std::make_pair(y.kind, y.dest);
        });
    }

    for (NodeId id = 0; id < g.node_count(); ++id) {
        const SpannerNode& n = g.nodes[id];
        if (n.kind != SpannerNode::Kind::Steiner)
            continue;
        auto relay = std::make_shared<RelayTable>();
        relay->steiner = id;
        relay->point = n.lifted;
        relay->marked = n.marked;
        relay->landmark = !s.landmark_index.empty() && s.is_landmark(id);
        relay->entries = global_entries(id, EntryKind::MarkedRelay);
        for (auto x : n.marked)
            if (x != kNone)
                out.tables[x].relays.push_back(relay);
    }
    for (auto& t : out.tables)
        std::sort(t.relays.begin(), t.relays.end(), [](const auto& x, const auto& y) { return x->steiner < y->steiner; });
    return out;
}

// ---------------------------------------------------------------------------
// Binary format

namespace {

class Writer {
public:
    explicit Writer(bool counting) : counting_(counting) {}

    template <class T>
    void put(const T& v)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        if (!counting_) {
            const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
            bytes_.insert(bytes_.end(), p, p + sizeof(T));
        }
        size_ += sizeof(T);
    }
    void put_point(const Point3& p)
    {
        put(p.x);
        put(p.y);
        put(p.z);
    }
    void put_u8(std::uint8_t v) { put(v); }
    void put_u16(std::uint16_t v) { put(v); }
    void put_u32(std::uint32_t v) { put(v); }
    void put_count(std::size_t n) { put(static_cast<std::uint32_t>(n)); }

    std::size_t size() const { return size_; }
    std::vector<std::uint8_t>& bytes() { return bytes_; }
    void patch_u32(std::size_t at, std::uint32_t v)
    {
        if (!counting_)
            std::memcpy(bytes_.data() + at, &v, sizeof v);
    }

private:
    bool counting_;
    std::size_t size_ = 0;
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    Reader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}

    template <class T>
    T get()
    {
        if (pos_ + sizeof(T) > n_)
            throw Error(ErrorCode::TruncatedStream, "table stream ends inside a record");
        T v;
        std::memcpy(&v, p_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    Point3 get_point()
    {
        const double x = get<double>(), y = get<double>(), z = get<double>();
        return {x, y, z};
    }
    std::uint32_t get_count(std::size_t min_record)
    {
        const auto n = get<std::uint32_t>();
        if (min_record > 0 && std::size_t(n) * min_record > n_ - pos_)
            throw Error(ErrorCode::TruncatedStream, "record count exceeds the remaining stream");
        return n;
    }
    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ == n_; }

private:
    const std::uint8_t* p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

constexpr std::size_t kEntryBytes = 1 + 4 + 4 + 9 * 8 + 1 + 4 + 8 + 24;

void write_entry(Writer& w, const RoutingEntry& e)
{
    w.put_u8(static_cast<std::uint8_t>(e.kind));
    w.put_u32(e.dest);
    w.put_u32(e.via);
    w.put_point(e.plane.anchor());
    w.put_point(e.plane.dir1());
    w.put_point(e.plane.dir2());
    w.put_u8(static_cast<std::uint8_t>(e.next.kind));
    w.put_u32(e.next.id);
    w.put_u32(e.next.marked[0]);
    w.put_u32(e.next.marked[1]);
    w.put_point(e.next.point);
}

RoutingEntry read_entry(Reader& r)
{
    RoutingEntry e;
    const auto kind = r.get<std::uint8_t>();
    if (kind > static_cast<std::uint8_t>(EntryKind::MarkedRelay))
        throw Error(ErrorCode::ParseError, "unknown entry kind");
    e.kind = static_cast<EntryKind>(kind);
    e.dest = r.get<std::uint32_t>();
    e.via = r.get<std::uint32_t>();
    const Point3 a = r.get_point();
    const Vec3 d1 = r.get_point();
    const Vec3 d2 = r.get_point();
    e.plane = Plane::from_directions(a, d1, d2);
    const auto pk = r.get<std::uint8_t>();
    if (pk > 1)
        throw Error(ErrorCode::ParseError, "unknown pseudo-target kind");
    e.next.kind = static_cast<PseudoTarget::Kind>(pk);
    e.next.id = r.get<std::uint32_t>();
    e.next.marked[0] = r.get<std::uint32_t>();
    e.next.marked[1] = r.get<std::uint32_t>();
    e.next.point = r.get_point();
    return e;
}

void write_label(Writer& w, const NodeLabel& l)
{
    for (auto v : {l.vertex, l.rep, l.node, l.landmark, l.landmark_vertex, l.patch, l.cell})
        w.put_u32(v);
}

NodeLabel read_label(Reader& r)
{
    NodeLabel l;
    l.vertex = r.get<std::uint32_t>();
    l.rep = r.get<std::uint32_t>();
    l.node = r.get<std::uint32_t>();
    l.landmark = r.get<std::uint32_t>();
    l.landmark_vertex = r.get<std::uint32_t>();
    l.patch = r.get<std::uint32_t>();
    l.cell = r.get<std::uint32_t>();
    return l;
}

void write_payload(Writer& w, const TableSet& t)
{
    if (t.empty())
        return;
    w.put(t.meta.eps);
    w.put(t.meta.delta);
    w.put(t.meta.theta_m);
    w.put(t.meta.d_hat);
    w.put(t.meta.seed);
    w.put_u8(t.meta.seeded ? 1 : 0);
    w.put_u32(t.meta.node_count);
    w.put_u32(t.meta.patch_count);

    w.put_count(t.mesh.vertex_count());
    for (const auto& p : t.mesh.vertices())
        w.put_point(p);
    w.put_count(t.mesh.face_count());
    for (const auto& f : t.mesh.faces())
        for (auto v : f)
            w.put_u32(v);

    w.put_count(t.tables.size());
    for (const auto& tab : t.tables) {
        const std::size_t at = w.size();
        w.put_u32(0);  // section length, patched below
        w.put_u32(tab.vertex);
        write_label(w, tab.label);
        w.put_u32(tab.node);
        w.put_u8(tab.landmark ? 1 : 0);
        w.put_count(tab.entries.size());
        for (const auto& e : tab.entries)
            write_entry(w, e);
        w.put_count(tab.relays.size());
        for (const auto& rel : tab.relays) {
            w.put_u32(rel->steiner);
            w.put_point(rel->point);
            w.put_u32(rel->marked[0]);
            w.put_u32(rel->marked[1]);
            w.put_u8(rel->landmark ? 1 : 0);
            w.put_count(rel->entries.size());
            for (const auto& e : rel->entries)
                write_entry(w, e);
        }
        w.put_count(tab.neighbour_map.size());
        for (const auto& [x, y] : tab.neighbour_map) {
            w.put_u32(x);
            w.put_u32(y);
        }
        w.put_count(tab.opposite_face_map.size());
        for (const auto& [x, y] : tab.opposite_face_map) {
            w.put_u32(x);
            w.put_u32(y);
        }
        w.patch_u32(at, static_cast<std::uint32_t>(w.size() - at - 4));
    }
}

TableSet read_payload(Reader& r, std::size_t len)
{
    TableSet t;
    if (len == 0)
        return t;
    t.meta.eps = r.get<double>();
    t.meta.delta = r.get<double>();
    t.meta.theta_m = r.get<double>();
    t.meta.d_hat = r.get<double>();
    t.meta.seed = r.get<std::uint64_t>();
    t.meta.seeded = r.get<std::uint8_t>() != 0;
    t.meta.node_count = r.get<std::uint32_t>();
    t.meta.patch_count = r.get<std::uint32_t>();

    std::vector<Point3> verts(r.get_count(24));
    for (auto& p : verts)
        p = r.get_point();
    std::vector<std::array<VertexId, 3>> faces(r.get_count(12));
    for (auto& f : faces)
        for (auto& v : f)
            v = r.get<std::uint32_t>();
    t.mesh = TriangulatedPolytope::build(std::move(verts), std::move(faces));

    std::map<NodeId, std::shared_ptr<const RelayTable>> shared;
    t.tables.resize(r.get_count(4));
    for (auto& tab : t.tables) {
        const auto section = r.get<std::uint32_t>();
        const std::size_t start = r.pos();
        tab.vertex = r.get<std::uint32_t>();
        tab.label = read_label(r);
        tab.node = r.get<std::uint32_t>();
        tab.landmark = r.get<std::uint8_t>() != 0;
        tab.entries.resize(r.get_count(kEntryBytes));
        for (auto& e : tab.entries)
            e = read_entry(r);
        const auto relays = r.get_count(45);
        for (std::uint32_t i = 0; i < relays; ++i) {
            auto rel = std::make_shared<RelayTable>();
            rel->steiner = r.get<std::uint32_t>();
            rel->point = r.get_point();
            rel->marked[0] = r.get<std::uint32_t>();
            rel->marked[1] = r.get<std::uint32_t>();
            rel->landmark = r.get<std::uint8_t>() != 0;
            rel->entries.resize(r.get_count(kEntryBytes));
            for (auto& e : rel->entries)
                e = read_entry(r);
            auto [it, fresh] = shared.emplace(rel->steiner, rel);
            if (!fresh && !(*it->second == *rel))
                throw Error(ErrorCode::ParseError, "inconsistent copies of a relay table");
            tab.relays.push_back(it->second);
        }
        tab.neighbour_map.resize(r.get_count(8));
        for (auto& [x, y] : tab.neighbour_map) {
            x = r.get<std::uint32_t>();
            y = r.get<std::uint32_t>();
        }
        tab.opposite_face_map.resize(r.get_count(8));
        for (auto& [x, y] : tab.opposite_face_map) {
            x = r.get<std::uint32_t>();
            y = r.get<std::uint32_t>();
        }
        if (r.pos() - start != section)
            throw Error(ErrorCode::ParseError, "vertex section length mismatch");
    }
    if (!r.done())
        throw Error(ErrorCode::ParseError, "trailing bytes in table payload");
    return t;
}

std::uint32_t crc_of(const std::uint8_t* p, std::size_t n)
{
    uLong crc = crc32(0L, Z_NULL, 0);
    while (n > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
        crc = crc32(crc, p, chunk);
        p += chunk;
        n -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

} // namespace

std::vector<std::uint8_t> serialize(const TableSet& t)
{
    Writer w(false);
    w.put_u8('P');
    w.put_u8('R');
    w.put_u8('T');
    w.put_u8('1');
    w.put_u16(kFormatVersion);
    w.put_u16(0);
    w.put_u32(0);
    write_payload(w, t);
    const std::size_t payload = w.size() - kHeaderBytes;
    if (payload > 0xFFFFFFFFu)
        throw Error(ErrorCode::IoError, "table set too large for the format");
    w.patch_u32(8, static_cast<std::uint32_t>(payload));
    w.put_u32(crc_of(w.bytes().data(), w.bytes().size()));
    return std::move(w.bytes());
}

std::size_t serialized_size(const TableSet& t)
{
    Writer w(true);
    write_payload(w, t);
    return kHeaderBytes + w.size() + 4;
}

TableSet deserialize(const std::vector<std::uint8_t>& bytes)
{
    if (bytes.size() < kHeaderBytes)
        throw Error(ErrorCode::TruncatedStream, "table stream shorter than its header");
    if (std::memcmp(bytes.data(), "PRT", 3) != 0)
        throw Error(ErrorCode::ParseError, "not a table stream (bad magic)");
    std::uint16_t version;
    std::uint32_t len;
    std::memcpy(&version, bytes.data() + 4, 2);
    std::memcpy(&len, bytes.data() + 8, 4);
    if (bytes[3] != '1' || version != kFormatVersion)
        throw Error(ErrorCode::FormatVersionMismatch,
                    "table format version " + std::to_string(version) + " is not supported");
    if (bytes.size() < kHeaderBytes + std::size_t(len) + 4)
        throw Error(ErrorCode::TruncatedStream, "table stream is truncated");
    if (bytes.size() > kHeaderBytes + std::size_t(len) + 4)
        throw Error(ErrorCode::ParseError, "trailing bytes after table stream");
    std::uint32_t stored;
    std::memcpy(&stored, bytes.data() + kHeaderBytes + len, 4);
    if (crc_of(bytes.data(), kHeaderBytes + len) != stored)
        throw Error(ErrorCode::ChecksumMismatch, "table stream checksum mismatch");
    Reader r(bytes.data() + kHeaderBytes, len);
    return read_payload(r, len);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json point_json(const Point3& p) { return {p.x, p.y, p.z}; }

nlohmann::json entry_json(const RoutingEntry& e)
{
    const auto id = [](std::uint32_t v) { return v == kNone ? nlohmann::json(nullptr) : nlohmann::json(v); };
    return {{"kind", entry_kind_name(e.kind)},
            {"dest", e.dest},
            {"via", e.via},
            {"plane", {point_json(e.plane.anchor()), point_json(e.plane.point1()), point_json(e.plane.point2())}},
            {"next",
             {{"kind", e.next.kind == PseudoTarget::Kind::Vertex ? "vertex" : "steiner"},
              {"id", e.next.id},
              {"marked", {id(e.next.marked[0]), id(e.next.marked[1])}},
              {"point", point_json(e.next.point)}}}};
}

} // namespace

std::string to_json(const TableSet& t, bool pretty)
{
    using nlohmann::json;
    const auto id = [](std::uint32_t v) { return v == kNone ? json(nullptr) : json(v); };
    json root;
    root["format"] = "PRT1";
    root["meta"] = {{"eps", t.meta.eps},
                    {"delta", t.meta.delta},
                    {"theta_m", t.meta.theta_m},
                    {"d_hat", t.meta.d_hat},
                    {"seed", t.meta.seed},
                    {"seeded", t.meta.seeded},
                    {"node_count", t.meta.node_count},
                    {"patch_count", t.meta.patch_count}};
    root["mesh"] = {{"vertices", t.mesh.vertex_count()}, {"faces", t.mesh.face_count()}};
    json tables = json::array();
    for (const auto& tab : t.tables) {
        json j;
        j["vertex"] = tab.vertex;
        const auto& l = tab.label;
        j["label"] = {{"vertex", l.vertex},   {"rep", l.rep},   {"node", id(l.node)},
                      {"landmark", id(l.landmark)}, {"landmark_vertex", id(l.landmark_vertex)},
                      {"patch", l.patch},     {"cell", l.cell}};
        j["node"] = id(tab.node);
        j["landmark"] = tab.landmark;
        j["entries"] = json::array();
        for (const auto& e : tab.entries)
            j["entries"].push_back(entry_json(e));
        j["relays"] = json::array();
        for (const auto& r : tab.relays) {
            json rj = {{"steiner", r->steiner},
                       {"point", point_json(r->point)},
                       {"marked", {id(r->marked[0]), id(r->marked[1])}},
                       {"landmark", r->landmark},
                       {"entries", json::array()}};
            for (const auto& e : r->entries)
                rj["entries"].push_back(entry_json(e));
            j["relays"].push_back(std::move(rj));
        }
        j["neighbour_map"] = json::array();
        for (const auto& [w, n] : tab.neighbour_map)
            j["neighbour_map"].push_back({w, id(n)});
        j["opposite_face_map"] = json::array();
        for (const auto& [f, g] : tab.opposite_face_map)
            j["opposite_face_map"].push_back({f, g});
        tables.push_back(std::move(j));
    }
    root["tables"] = std::move(tables);
    return root.dump(pretty ? 2 : -1);
}

} // namespace polyroute
