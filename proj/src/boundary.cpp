#include "sorptran/boundary.hpp"

#include "sorptran/errors.hpp"

namespace sorptran {

namespace {

void set(Field& f, std::size_t k, double u, const IsothermSpec& iso)
{
    f.u[k] = u;
    f.q[k] = iso.eval_extended(u);
}

} // namespace

void fill_ghosts(const Grid1D& g, const Boundary1D& bc, double t, const IsothermSpec& iso, Field& f)
{
    const int m = g.cells();
    const auto side = [&](const BoundarySide& s, int ghost, int inner) {
        switch (s.kind) {
        case BoundarySide::Kind::dirichlet:
            set(f, g.index(ghost), s.value, iso);
            break;
        case BoundarySide::Kind::outflow:
            set(f, g.index(ghost), f.u[g.index(inner)], iso);
            break;
        case BoundarySide::Kind::function:
            set(f, g.index(ghost), s.cell_value(g.edge(ghost - 1), g.edge(ghost), t), iso);
            break;
        }
    };
    side(bc.left, 0, 1);
    side(bc.left, -1, 1);
    side(bc.right, m + 1, m);
    side(bc.right, m + 2, m);
}

void refresh_outflow(const Grid1D& g, const Boundary1D& bc, const IsothermSpec& iso, Field& f)
{
    const int m = g.cells();
    if (bc.left.kind == BoundarySide::Kind::outflow) {
        set(f, g.index(0), f.u[g.index(1)], iso);
        set(f, g.index(-1), f.u[g.index(1)], iso);
    }
    if (bc.right.kind == BoundarySide::Kind::outflow) {
        set(f, g.index(m + 1), f.u[g.index(m)], iso);
        set(f, g.index(m + 2), f.u[g.index(m)], iso);
    }
}

namespace {

void side_2d(const Grid2D& g, const BoundarySide& s, int side_id, bool only_outflow, const IsothermSpec& iso,
             Field& f)
{
    if (s.kind == BoundarySide::Kind::function)
        throw ValidationError({"2D boundaries support only dirichlet and outflow"});
    if (only_outflow && s.kind != BoundarySide::Kind::outflow) return;
    const int m = g.cells();
    for (int k = 1; k <= m; ++k) {
        for (int layer = 1; layer <= kGhost; ++layer) {
            std::size_t ghost = 0;
            std::size_t inner = 0;
            switch (side_id) {
            case 0: ghost = g.index(1 - layer, k); inner = g.index(1, k); break;  // west
            case 1: ghost = g.index(m + layer, k); inner = g.index(m, k); break;  // east
            case 2: ghost = g.index(k, 1 - layer); inner = g.index(k, 1); break;  // south
            default: ghost = g.index(k, m + layer); inner = g.index(k, m); break; // north
            }
            set(f, ghost, s.kind == BoundarySide::Kind::outflow ? f.u[inner] : s.value, iso);
        }
    }
}

} // namespace

void fill_ghosts(const Grid2D& g, const Boundary2D& bc, double /*t*/, const IsothermSpec& iso, Field& f)
{
    side_2d(g, bc.west, 0, false, iso, f);
    side_2d(g, bc.east, 1, false, iso, f);
    side_2d(g, bc.south, 2, false, iso, f);
    side_2d(g, bc.north, 3, false, iso, f);
}

void refresh_outflow(const Grid2D& g, const Boundary2D& bc, const IsothermSpec& iso, Field& f)
{
    side_2d(g, bc.west, 0, true, iso, f);
    side_2d(g, bc.east, 1, true, iso, f);
    side_2d(g, bc.south, 2, true, iso, f);
    side_2d(g, bc.north, 3, true, iso, f);
}

} // namespace sorptran
