// surface.hpp
// Combinatorial model of the closed hyperbolic surface tesselated by regular
// right-angled m-gons whose dual graph is the 1-skeleton of the m-cube.
//
// Labeling conventions (fixed once, everything downstream depends on them):
//   - cube vertices are m-bit masks; bit p (from LSB) is coordinate p, p in 0..m-1
//   - axes are 0-based internally and cyclic mod m; axis p and p+1 mod m are
//     adjacent, so the pair (m-1, 0) is adjacent.  1-based only in I/O.
//   - a realised square is { (a, a+1 mod m), rest } where rest lists the m-2
//     fixed coordinates in increasing position order
//   - a geodesic label {i, (a_1..a_k)}, k = m-3, stores a_t at the cyclic
//     position i+1+t mod m (so the tuple walks positions i+2, i+3, ..., i-2
//     in 1-based terms).  Packed MSB-first: a_1 is bit k-1, a_k is bit 0,
//     which makes integer order equal lexicographic order on tuples.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cubetess {

using VertexBits = std::uint32_t;

struct SurfaceParams {
    int m = 5;
};

// Edge {lo, lo ^ (1<<axis)} of the cube graph; bit `axis` of lo is always 0.
struct CubeEdge {
    VertexBits lo = 0;
    int axis = 0;

    VertexBits hi() const { return lo | (VertexBits{1} << axis); }
    friend bool operator==(const CubeEdge&, const CubeEdge&) = default;
    friend auto operator<=>(const CubeEdge&, const CubeEdge&) = default;
};

// Realised square: the axis pair (axis_lo, axis_lo+1 mod m) is free, the
// remaining m-2 coordinates are fixed.  rest bit t = value at the t-th
// smallest position outside the pair.
struct Square {
    int axis_lo = 0;
    std::uint32_t rest = 0;

    friend bool operator==(const Square&, const Square&) = default;
};

struct Systole {
    int axis = 0;
    std::uint32_t tuple = 0;   // k = m-3 bits, MSB-first

    friend bool operator==(const Systole&, const Systole&) = default;
};

// Everything about one systole's trip around the surface: the four realised
// squares it passes through and the four tesselation edges it traverses, in
// cyclic order (square t, edge t, square t+1, ...).  Consecutive squares
// share the edge between them; within each square the two incident traversed
// edges are opposite edges of that square.
struct SystoleCycle {
    std::array<int, 4> square_ids{};
    std::array<CubeEdge, 4> edges{};
};

struct SurfaceModel {
    SurfaceParams params;
    std::vector<Systole> systoles;                  // lex order on (axis, tuple)
    std::vector<Square> squares;                    // lex order on (axes pair, rest)
    std::vector<std::array<int, 2>> square_systoles;  // the 2 geodesics through each square
    std::vector<std::array<int, 4>> systole_squares;  // 4 squares per systole, sorted
    std::vector<SystoleCycle> systole_cycles;
    std::vector<std::array<int, 4>> neighbors;      // the 4 intersecting systoles, sorted
    int genus = 0;

    int m() const { return params.m; }
    int n_systoles() const { return static_cast<int>(systoles.size()); }
    int n_squares() const { return static_cast<int>(squares.size()); }

    int systole_index(const Systole& s) const;
    int square_index(const Square& q) const;
};

// Thrown on invalid parameters (m < 5 breaks hyperbolicity: m=3,4 give the
// sphere and torus).
struct DomainError : std::exception {
    std::string message;
    explicit DomainError(std::string msg) : message(std::move(msg)) {}
    const char* what() const noexcept override { return message.c_str(); }
};

int genus_for(int m);              // 1 + (m-4) 2^{m-3}
int systole_count_for(int m);      // m 2^{m-3}
int min_intersections(int m);      // M(m) = 1 - 2^{m-2}(4-m) = 2g - 1

SurfaceModel build_surface(SurfaceParams params);

// The 4 realised squares of a labelled geodesic, independent of a built model.
std::array<Square, 4> systole_squares_of(const Systole& s, SurfaceParams params);

// The 4 cube edges traversed by a labelled geodesic.
std::array<CubeEdge, 4> systole_edges_of(const Systole& s, SurfaceParams params);

// Combinatorial intersection rule: axes differ by 1 mod m and the overlapping
// tuple entries agree (equivalently, the two geodesics share a realised square).
bool intersects(const Systole& a, const Systole& b, SurfaceParams params);

// A: n x n symmetric 0/1 intersection matrix, zero diagonal, row sums 4.
// N: 2n x n square-membership matrix, column sums 4, row sums 2.
struct IncidenceMatrices {
    std::vector<std::vector<int>> A;
    std::vector<std::vector<int>> N;
};
IncidenceMatrices incidence_matrices(const SurfaceModel& model);

// Which geodesic traverses a given cube edge (each edge belongs to exactly one).
Systole systole_through_edge(const CubeEdge& e, SurfaceParams params);

bool valid_label(const Systole& s, SurfaceParams params);

// Textual label "i:(a1,...,ak)", 1-based axis, used in CLI output and caches.
std::string systole_label(const Systole& s, SurfaceParams params);
Systole parse_systole_label(const std::string& text, SurfaceParams params);

std::string surface_to_json(const SurfaceModel& model);

// Intersection graph in DOT format (nodes labelled by systole labels).
std::string intersection_graph_dot(const SurfaceModel& model);

}  // namespace cubetess
