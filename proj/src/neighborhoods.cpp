#include "lpm/neighborhoods.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <numeric>
#include <queue>

namespace lpm {

namespace {

using Candidate = std::pair<double, Index>;  // (squared distance, index)

// Static kd-tree over the rows of X, exact queries with (distance, index)
// tie-breaking so results match the brute-force reference bit for bit.
class KdTree {
public:
    explicit KdTree(const Matrix& x) : x_(x), idx_(x.rows()) {
        std::iota(idx_.begin(), idx_.end(), Index{0});
        nodes_.reserve(2 * x.rows() / kLeafSize + 2);
        if (x.rows() > 0) root_ = build(0, x.rows());
    }

    // k smallest (d2, index) pairs among rows != query_index, sorted ascending.
    std::vector<Candidate> knn(Index query_index, Index k) const {
        std::priority_queue<Candidate> heap;  // max-heap on (d2, index)
        const RowVector q = x_.row(query_index);
        search(root_, q, query_index, k, heap);
        std::vector<Candidate> out(heap.size());
        for (Index i = static_cast<Index>(out.size()) - 1; i >= 0; --i) {
            out[i] = heap.top();
            heap.pop();
        }
        return out;
    }

    std::vector<Candidate> radius(Index query_index, double eps2) const {
        std::vector<Candidate> out;
        const RowVector q = x_.row(query_index);
        search_radius(root_, q, query_index, eps2, out);
        std::sort(out.begin(), out.end(),
                  [](const Candidate& a, const Candidate& b) { return a.second < b.second; });
        return out;
    }

private:
    static constexpr Index kLeafSize = 16;

    struct Node {
        int dim = -1;        // -1 for leaves
        double split = 0.0;
        Index left = -1, right = -1;
        Index begin = 0, end = 0;  // leaf range into idx_
    };

    Index build(Index begin, Index end) {
        Node node;
        if (end - begin <= kLeafSize) {
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<Index>(nodes_.size()) - 1;
        }
        // Split the widest dimension at the median.
        int dim = 0;
        double best_spread = -1.0;
        for (int d = 0; d < x_.cols(); ++d) {
            double lo = x_(idx_[begin], d), hi = lo;
            for (Index i = begin + 1; i < end; ++i) {
                const double v = x_(idx_[i], d);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                dim = d;
            }
        }
        const Index mid = begin + (end - begin) / 2;
        std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                         [&](Index a, Index b) { return x_(a, dim) < x_(b, dim); });
        node.dim = dim;
        node.split = x_(idx_[mid], dim);
        const Index self = static_cast<Index>(nodes_.size());
        nodes_.push_back(node);
        const Index left = build(begin, mid);
        const Index right = build(mid, end);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void search(Index node_id, const RowVector& q, Index skip, Index k,
                std::priority_queue<Candidate>& heap) const {
        const Node& node = nodes_[node_id];
        if (node.dim < 0) {
            for (Index i = node.begin; i < node.end; ++i) {
                const Index j = idx_[i];
                if (j == skip) continue;
                const double d2 = (x_.row(j) - q).squaredNorm();
                const Candidate c{d2, j};
                if (static_cast<Index>(heap.size()) < k) {
                    heap.push(c);
                } else if (c < heap.top()) {
                    heap.pop();
                    heap.push(c);
                }
            }
            return;
        }
        const double delta = q[node.dim] - node.split;
        const Index near = delta < 0.0 ? node.left : node.right;
        const Index far = delta < 0.0 ? node.right : node.left;
        search(near, q, skip, k, heap);
        // Visit the far side on exact plane ties too: an equal-distance point
        // with a lower index may still displace the current worst.
        if (static_cast<Index>(heap.size()) < k || delta * delta <= heap.top().first)
            search(far, q, skip, k, heap);
    }

    void search_radius(Index node_id, const RowVector& q, Index skip, double eps2,
                       std::vector<Candidate>& out) const {
        const Node& node = nodes_[node_id];
        if (node.dim < 0) {
            for (Index i = node.begin; i < node.end; ++i) {
                const Index j = idx_[i];
                if (j == skip) continue;
                const double d2 = (x_.row(j) - q).squaredNorm();
                if (d2 <= eps2) out.emplace_back(d2, j);
            }
            return;
        }
        const double delta = q[node.dim] - node.split;
        const Index near = delta < 0.0 ? node.left : node.right;
        const Index far = delta < 0.0 ? node.right : node.left;
        search_radius(near, q, skip, eps2, out);
        if (delta * delta <= eps2) search_radius(far, q, skip, eps2, out);
    }

    const Matrix& x_;
    std::vector<Index> idx_;
    std::vector<Node> nodes_;
    Index root_ = 0;
};

void finalize_radii(NeighborhoodGraph& g, const Matrix& x) {
    g.radii.assign(g.n, 0.0);
    double r_max = 0.0;
    for (Index i = 0; i < g.n; ++i) {
        double r = 0.0;
        for (Index j : g.neighbors[i]) r = std::max(r, (x.row(j) - x.row(i)).norm());
        g.radii[i] = r;
        r_max = std::max(r_max, r);
    }
    g.r_max = r_max;
}

void validate_points(const Matrix& x) {
    require_finite(x, "graph construction: points");
    if (x.rows() < 2) throw InvalidInput("graph construction: need at least 2 points");
}

}  // namespace

NeighborhoodGraph knn_graph_brute_force(const Matrix& x, Index k) {
    validate_points(x);
    const Index n = x.rows();
    if (k < 1 || k >= n) throw InvalidInput("knn_graph: k must satisfy 1 <= k < n");
    NeighborhoodGraph g;
    g.n = n;
    g.neighbors.resize(n);
    parallel_for(0, n, [&](Index i) {
        std::vector<Candidate> cands;
        cands.reserve(n - 1);
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            cands.emplace_back((x.row(j) - x.row(i)).squaredNorm(), j);
        }
        std::partial_sort(cands.begin(), cands.begin() + k, cands.end());
        auto& nb = g.neighbors[i];
        nb.resize(k);
        for (Index j = 0; j < k; ++j) nb[j] = cands[j].second;
    });
    finalize_radii(g, x);
    return g;
}

NeighborhoodGraph knn_graph(const Matrix& x, Index k) {
    validate_points(x);
    const Index n = x.rows();
    if (k < 1 || k >= n) throw InvalidInput("knn_graph: k must satisfy 1 <= k < n");
    if (n <= 512) return knn_graph_brute_force(x, k);
    KdTree tree(x);
    NeighborhoodGraph g;
    g.n = n;
    g.neighbors.resize(n);
    parallel_for(0, n, [&](Index i) {
        auto cands = tree.knn(i, k);
        auto& nb = g.neighbors[i];
        nb.resize(k);
        for (Index j = 0; j < k; ++j) nb[j] = cands[j].second;
    });
    finalize_radii(g, x);
    return g;
}

NeighborhoodGraph eps_graph(const Matrix& x, double eps) {
    validate_points(x);
    if (!(eps > 0.0)) throw InvalidInput("eps_graph: eps must be positive");
    const Index n = x.rows();
    const double eps2 = eps * eps;
    NeighborhoodGraph g;
    g.n = n;
    g.neighbors.resize(n);
    if (n <= 512) {
        parallel_for(0, n, [&](Index i) {
            auto& nb = g.neighbors[i];
            for (Index j = 0; j < n; ++j) {
                if (j == i) continue;
                if ((x.row(j) - x.row(i)).squaredNorm() <= eps2) nb.push_back(j);
            }
        });
    } else {
        KdTree tree(x);
        parallel_for(0, n, [&](Index i) {
            auto cands = tree.radius(i, eps2);
            auto& nb = g.neighbors[i];
            nb.reserve(cands.size());
            for (const auto& c : cands) nb.push_back(c.second);
        });
    }
    std::vector<Index> isolated;
    for (Index i = 0; i < n; ++i)
        if (g.neighbors[i].empty()) isolated.push_back(i);
    if (!isolated.empty())
        throw IsolatedPoints("eps_graph: " + std::to_string(isolated.size()) +
                                 " point(s) have no neighbor within eps",
                             isolated);
    finalize_radii(g, x);
    return g;
}

Matrix neighborhood_matrix(const Matrix& x, const NeighborhoodGraph& g, Index i) {
    if (i < 0 || i >= g.n) throw InvalidInput("neighborhood_matrix: index out of range");
    const auto members = g.members(i);
    Matrix out(static_cast<Index>(members.size()), x.cols());
    for (size_t r = 0; r < members.size(); ++r) out.row(static_cast<Index>(r)) = x.row(members[r]);
    return out;
}

std::vector<std::vector<Index>> NeighborhoodGraph::connected_components() const {
    std::vector<std::vector<Index>> undirected(n);
    for (Index i = 0; i < n; ++i)
        for (Index j : neighbors[i]) {
            undirected[i].push_back(j);
            undirected[j].push_back(i);
        }
    std::vector<std::vector<Index>> components;
    std::vector<char> seen(n, 0);
    for (Index s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<Index> comp;
        std::vector<Index> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (Index w : undirected[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

DensityReport density_report(const NeighborhoodGraph& g, Index bins) {
    DensityReport rep;
    rep.r_max = g.r_max;
    double sum = 0.0;
    double r_min = g.radii.empty() ? 0.0 : g.radii[0];
    for (double r : g.radii) {
        sum += r;
        r_min = std::min(r_min, r);
    }
    rep.r_mean = g.radii.empty() ? 0.0 : sum / static_cast<double>(g.radii.size());
    if (bins < 1) bins = 1;
    const double span = g.r_max - r_min;
    if (span <= 0.0) bins = 1;  // all radii identical: single bin
    rep.histogram.assign(bins, 0);
    rep.bin_edges.resize(bins + 1);
    for (Index b = 0; b <= bins; ++b)
        rep.bin_edges[b] = r_min + span * static_cast<double>(b) / static_cast<double>(bins);
    for (double r : g.radii) {
        Index b = span > 0.0 ? static_cast<Index>((r - r_min) / span * static_cast<double>(bins))
                             : 0;
        if (b >= bins) b = bins - 1;
        ++rep.histogram[b];
    }
    return rep;
}

std::string graph_to_json(const NeighborhoodGraph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    bool uniform = g.n > 0;
    for (const auto& nb : g.neighbors)
        if (nb.size() != g.neighbors[0].size()) uniform = false;
    if (uniform)
        j["k"] = g.neighbors[0].size();
    else
        j["k"] = nullptr;
    j["neighbors"] = g.neighbors;
    j["radii"] = g.radii;
    j["r_max"] = g.r_max;
    return j.dump();
}

NeighborhoodGraph graph_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    NeighborhoodGraph g;
    g.n = j.at("n").get<Index>();
    g.neighbors = j.at("neighbors").get<std::vector<std::vector<Index>>>();
    g.radii = j.at("radii").get<std::vector<double>>();
    g.r_max = j.at("r_max").get<double>();
    if (static_cast<Index>(g.neighbors.size()) != g.n ||
        static_cast<Index>(g.radii.size()) != g.n)
        throw InvalidInput("graph_from_json: inconsistent field lengths");
    return g;
}

}  // namespace lpm
