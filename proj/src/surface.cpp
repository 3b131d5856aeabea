#include "cubetess/surface.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cubetess {

namespace {

int mod_m(int a, int m) { return ((a % m) + m) % m; }

// 1-based sorted axis pair of a realised square, for ordering and printing.
// (axis_lo, axis_lo+1) wraps to (1, m) when axis_lo == m-1.
std::pair<int, int> axes_pair_1based(const Square& q, int m) {
    int a = q.axis_lo, b = mod_m(q.axis_lo + 1, m);
    int lo = std::min(a, b) + 1, hi = std::max(a, b) + 1;
    return {lo, hi};
}

// rest bits as the explicit coordinate sequence, increasing position order.
std::vector<int> rest_sequence(const Square& q, int m) {
    std::vector<int> out;
    out.reserve(m - 2);
    for (int t = 0; t < m - 2; ++t) out.push_back((q.rest >> t) & 1);
    return out;
}

bool square_less(const Square& a, const Square& b, int m) {
    auto pa = axes_pair_1based(a, m), pb = axes_pair_1based(b, m);
    if (pa != pb) return pa < pb;
    return rest_sequence(a, m) < rest_sequence(b, m);
}

bool systole_less(const Systole& a, const Systole& b) {
    if (a.axis != b.axis) return a.axis < b.axis;
    return a.tuple < b.tuple;   // MSB-first packing: integer order == lex order
}

// Tuple entry a_{t+1} (t = 0..k-1) of a geodesic label; lives at cyclic
// position axis+2+t mod m.
int tuple_entry(const Systole& s, int k, int t) {
    return (s.tuple >> (k - 1 - t)) & 1;
}

// Position -> tuple value map for the m-3 labelled coordinates.
// Positions axis-1, axis, axis+1 are not covered by the tuple.
std::array<int, 32> tuple_by_position(const Systole& s, int m) {
    std::array<int, 32> val{};
    val.fill(-1);
    int k = m - 3;
    for (int t = 0; t < k; ++t) val[mod_m(s.axis + 2 + t, m)] = tuple_entry(s, k, t);
    return val;
}

Square make_square(int m, int axis_lo, const std::array<int, 32>& bits_by_pos) {
    Square q;
    q.axis_lo = axis_lo;
    int slot = 0;
    int a = axis_lo, b = mod_m(axis_lo + 1, m);
    for (int p = 0; p < m; ++p) {
        if (p == a || p == b) continue;
        if (bits_by_pos[p]) q.rest |= (1u << slot);
        ++slot;
    }
    return q;
}

}  // namespace

int genus_for(int m) { return 1 + (m - 4) * (1 << (m - 3)); }

int systole_count_for(int m) { return m * (1 << (m - 3)); }

int min_intersections(int m) { return 1 - (1 << (m - 2)) * (4 - m); }

bool valid_label(const Systole& s, SurfaceParams params) {
    int m = params.m, k = m - 3;
    return s.axis >= 0 && s.axis < m && (s.tuple >> k) == 0;
}

std::array<Square, 4> systole_squares_of(const Systole& s, SurfaceParams params) {
    int m = params.m;
    auto bits = tuple_by_position(s, m);
    std::array<Square, 4> out;
    // Two squares with free axes (axis, axis+1): coordinate axis-1 ranges over Z_2.
    // Two squares with free axes (axis-1, axis): coordinate axis+1 ranges over Z_2.
    int idx = 0;
    for (int c = 0; c < 2; ++c) {
        auto b = bits;
        b[mod_m(s.axis - 1, m)] = c;
        out[idx++] = make_square(m, s.axis, b);
    }
    for (int c = 0; c < 2; ++c) {
        auto b = bits;
        b[mod_m(s.axis + 1, m)] = c;
        out[idx++] = make_square(m, mod_m(s.axis - 1, m), b);
    }
    return out;
}

std::array<CubeEdge, 4> systole_edges_of(const Systole& s, SurfaceParams params) {
    int m = params.m;
    auto bits = tuple_by_position(s, m);
    VertexBits base = 0;
    for (int p = 0; p < m; ++p)
        if (bits[p] == 1) base |= (VertexBits{1} << p);
    int prev = mod_m(s.axis - 1, m), next = mod_m(s.axis + 1, m);
    std::array<CubeEdge, 4> out;
    int idx = 0;
    for (int cp = 0; cp < 2; ++cp)
        for (int cn = 0; cn < 2; ++cn) {
            VertexBits lo = base;
            if (cp) lo |= (VertexBits{1} << prev);
            if (cn) lo |= (VertexBits{1} << next);
            out[idx++] = CubeEdge{lo, s.axis};
        }
    return out;
}

bool intersects(const Systole& a, const Systole& b, SurfaceParams params) {
    int m = params.m, k = m - 3;
    const Systole* lo = &a;
    const Systole* hi = &b;
    if (mod_m(lo->axis + 1, m) != hi->axis) std::swap(lo, hi);
    if (mod_m(lo->axis + 1, m) != hi->axis) return false;
    if (a.axis == b.axis) return false;
    // (a_2..a_k) of the lower axis equals (b_1..b_{k-1}) of the higher axis.
    std::uint32_t drop_first = lo->tuple & ((1u << (k - 1)) - 1);
    std::uint32_t drop_last = hi->tuple >> 1;
    return drop_first == drop_last;
}

Systole systole_through_edge(const CubeEdge& e, SurfaceParams params) {
    int m = params.m, k = m - 3;
    Systole s;
    s.axis = e.axis;
    for (int t = 0; t < k; ++t) {
        int pos = mod_m(e.axis + 2 + t, m);
        if ((e.lo >> pos) & 1) s.tuple |= (1u << (k - 1 - t));
    }
    return s;
}

int SurfaceModel::systole_index(const Systole& s) const {
    auto it = std::lower_bound(systoles.begin(), systoles.end(), s, systole_less);
    if (it == systoles.end() || !(*it == s))
        throw std::out_of_range("systole label not in model");
    return static_cast<int>(it - systoles.begin());
}

int SurfaceModel::square_index(const Square& q) const {
    int m = params.m;
    auto it = std::lower_bound(squares.begin(), squares.end(), q,
                               [m](const Square& a, const Square& b) { return square_less(a, b, m); });
    if (it == squares.end() || !(*it == q))
        throw std::out_of_range("square not in model");
    return static_cast<int>(it - squares.begin());
}

SurfaceModel build_surface(SurfaceParams params) {
    int m = params.m;
    if (m < 5)
        throw DomainError("m must be at least 5: m=3,4 give the sphere/torus, not a "
                          "hyperbolic surface (hyperbolicity bound)");
    if (m > 16) throw DomainError("m too large for the packed representation");

    SurfaceModel model;
    model.params = params;
    model.genus = genus_for(m);

    int k = m - 3;
    for (int axis = 0; axis < m; ++axis)
        for (std::uint32_t tuple = 0; tuple < (1u << k); ++tuple)
            model.systoles.push_back(Systole{axis, tuple});
    std::sort(model.systoles.begin(), model.systoles.end(), systole_less);

    for (int axis_lo = 0; axis_lo < m; ++axis_lo)
        for (std::uint32_t rest = 0; rest < (1u << (m - 2)); ++rest)
            model.squares.push_back(Square{axis_lo, rest});
    std::sort(model.squares.begin(), model.squares.end(),
              [m](const Square& a, const Square& b) { return square_less(a, b, m); });

    int n = model.n_systoles();
    model.square_systoles.assign(model.squares.size(), {-1, -1});
    model.systole_squares.resize(n);
    model.systole_cycles.resize(n);
    model.neighbors.resize(n);

    for (int i = 0; i < n; ++i) {
        auto sqs = systole_squares_of(model.systoles[i], params);
        std::array<int, 4> ids{};
        for (int t = 0; t < 4; ++t) {
            int id = model.square_index(sqs[t]);
            ids[t] = id;
            auto& owners = model.square_systoles[id];
            if (owners[0] < 0) owners[0] = i;
            else if (owners[1] < 0) owners[1] = i;
            else throw std::logic_error("square claimed by more than two systoles");
        }
        std::sort(ids.begin(), ids.end());
        model.systole_squares[i] = ids;
    }

    for (auto& owners : model.square_systoles) {
        if (owners[0] < 0 || owners[1] < 0)
            throw std::logic_error("realised square not covered by two systoles");
        if (owners[0] > owners[1]) std::swap(owners[0], owners[1]);
    }

    // Cycle order: start at the lex-least square, walk toward the lex-lesser
    // of the two edge-adjacent squares.  Consecutive squares share a traversed
    // edge; the edge between them is the one both are incident to.
    for (int i = 0; i < n; ++i) {
        auto edges = systole_edges_of(model.systoles[i], params);
        // Map: square id -> the two traversed edges on its boundary.
        std::map<int, std::vector<int>> edges_at_square;
        for (int t = 0; t < 4; ++t) {
            const CubeEdge& e = edges[t];
            // The two endpoint squares of edge e within this systole's square set:
            // axes (axis-1, axis) and (axis, axis+1), rest from e.lo.
            std::array<int, 32> bits{};
            for (int p = 0; p < m; ++p) bits[p] = (e.lo >> p) & 1;
            Square qa = make_square(m, mod_m(e.axis - 1, m), bits);
            Square qb = make_square(m, e.axis, bits);
            edges_at_square[model.square_index(qa)].push_back(t);
            edges_at_square[model.square_index(qb)].push_back(t);
        }
        for (auto& [sq, es] : edges_at_square)
            if (es.size() != 2) throw std::logic_error("systole cycle: bad square valency");

        auto other_square = [&](int edge_t, int sq) {
            const CubeEdge& e = edges[edge_t];
            std::array<int, 32> bits{};
            for (int p = 0; p < m; ++p) bits[p] = (e.lo >> p) & 1;
            int qa = model.square_index(make_square(m, mod_m(e.axis - 1, m), bits));
            int qb = model.square_index(make_square(m, e.axis, bits));
            return sq == qa ? qb : qa;
        };

        int start = model.systole_squares[i][0];  // sorted, so lex-least
        auto& start_edges = edges_at_square.at(start);
        int next0 = other_square(start_edges[0], start);
        int next1 = other_square(start_edges[1], start);
        int first_edge = start_edges[0];
        if (next1 < next0) first_edge = start_edges[1];

        SystoleCycle cyc;
        int cur_sq = start, cur_edge = first_edge;
        for (int t = 0; t < 4; ++t) {
            cyc.square_ids[t] = cur_sq;
            cyc.edges[t] = edges[cur_edge];
            int nxt_sq = other_square(cur_edge, cur_sq);
            auto& es = edges_at_square.at(nxt_sq);
            int nxt_edge = (es[0] == cur_edge) ? es[1] : es[0];
            cur_sq = nxt_sq;
            cur_edge = nxt_edge;
        }
        if (cur_sq != start) throw std::logic_error("systole cycle did not close");
        model.systole_cycles[i] = cyc;
    }

    for (int i = 0; i < n; ++i) {
        std::array<int, 4> nb{};
        int c = 0;
        for (int sq : model.systole_squares[i]) {
            auto owners = model.square_systoles[sq];
            nb[c++] = owners[0] == i ? owners[1] : owners[0];
        }
        std::sort(nb.begin(), nb.end());
        model.neighbors[i] = nb;
    }

    return model;
}

IncidenceMatrices incidence_matrices(const SurfaceModel& model) {
    int n = model.n_systoles();
    IncidenceMatrices mats;
    mats.A.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j : model.neighbors[i]) mats.A[i][j] = 1;
    mats.N.assign(model.n_squares(), std::vector<int>(n, 0));
    for (int q = 0; q < model.n_squares(); ++q)
        for (int j : model.square_systoles[q]) mats.N[q][j] = 1;
    return mats;
}

std::string systole_label(const Systole& s, SurfaceParams params) {
    int k = params.m - 3;
    std::ostringstream os;
    os << (s.axis + 1) << ":(";
    for (int t = 0; t < k; ++t) {
        if (t) os << ",";
        os << tuple_entry(s, k, t);
    }
    os << ")";
    return os.str();
}

Systole parse_systole_label(const std::string& text, SurfaceParams params) {
    int m = params.m, k = m - 3;
    std::istringstream is(text);
    int axis1 = 0;
    char ch = 0;
    if (!(is >> axis1 >> ch) || ch != ':') throw DomainError("bad systole label: " + text);
    if (!(is >> ch) || ch != '(') throw DomainError("bad systole label: " + text);
    Systole s;
    s.axis = axis1 - 1;
    for (int t = 0; t < k; ++t) {
        int bit = 0;
        if (!(is >> bit)) throw DomainError("bad systole label: " + text);
        if (bit) s.tuple |= (1u << (k - 1 - t));
        if (t + 1 < k) {
            if (!(is >> ch) || ch != ',') throw DomainError("bad systole label: " + text);
        }
    }
    if (!(is >> ch) || ch != ')') throw DomainError("bad systole label: " + text);
    if (!valid_label(s, params)) throw DomainError("label out of range: " + text);
    return s;
}

std::string surface_to_json(const SurfaceModel& model) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["m"] = model.m();
    j["genus"] = model.genus;
    auto arr = nlohmann::json::array();
    int k = model.m() - 3;
    for (const auto& s : model.systoles) {
        nlohmann::json js;
        js["axis"] = s.axis + 1;
        auto tup = nlohmann::json::array();
        for (int t = 0; t < k; ++t) tup.push_back(tuple_entry(s, k, t));
        js["tuple"] = tup;
        arr.push_back(js);
    }
    j["systoles"] = arr;
    return j.dump(2);
}

std::string intersection_graph_dot(const SurfaceModel& model) {
    std::ostringstream os;
    os << "graph systole_intersections {\n";
    for (int i = 0; i < model.n_systoles(); ++i)
        os << "  n" << i << " [label=\"" << systole_label(model.systoles[i], model.params)
           << "\"];\n";
    for (int i = 0; i < model.n_systoles(); ++i)
        for (int j : model.neighbors[i])
            if (i < j) os << "  n" << i << " -- n" << j << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace cubetess
