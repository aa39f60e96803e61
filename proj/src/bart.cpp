#include "rankdyn/bart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <istream>
#include <sstream>

#include "rankdyn/num_text.hpp"

namespace rankdyn {

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

DecisionTree::DecisionTree()
{
    nodes_.resize(1);
}

int DecisionTree::num_leaves() const
{
    int c = 0;
    for (const auto& nd : nodes_)
        if (nd.is_leaf())
            ++c;
    return c;
}

int DecisionTree::leaf_for(const double* x) const
{
    int id = 0;
    while (!nodes_[id].is_leaf())
        id = (x[nodes_[id].var] <= nodes_[id].cut) ? nodes_[id].left : nodes_[id].right;
    return id;
}

std::vector<int> DecisionTree::leaves() const
{
    std::vector<int> out;
    for (int id = 0; id < num_nodes(); ++id)
        if (nodes_[id].is_leaf())
            out.push_back(id);
    return out;
}

std::vector<int> DecisionTree::internal_nodes() const
{
    std::vector<int> out;
    for (int id = 0; id < num_nodes(); ++id)
        if (!nodes_[id].is_leaf())
            out.push_back(id);
    return out;
}

std::vector<int> DecisionTree::nog_nodes() const
{
    std::vector<int> out;
    for (int id = 0; id < num_nodes(); ++id) {
        const auto& nd = nodes_[id];
        if (!nd.is_leaf() && nodes_[nd.left].is_leaf() && nodes_[nd.right].is_leaf())
            out.push_back(id);
    }
    return out;
}

void DecisionTree::box_at(int id, std::vector<double>& lo, std::vector<double>& hi, int dim) const
{
    lo.assign(dim, -kInf);
    hi.assign(dim, kInf);
    int cur = id;
    while (nodes_[cur].parent >= 0) {
        int p = nodes_[cur].parent;
        const auto& pn = nodes_[p];
        if (pn.left == cur)
            hi[pn.var] = std::min(hi[pn.var], pn.cut);
        else
            lo[pn.var] = std::max(lo[pn.var], pn.cut);
        cur = p;
    }
}

void DecisionTree::grow(int leaf_id, int var, double cut, double mu_left, double mu_right)
{
    if (!nodes_[leaf_id].is_leaf())
        throw InternalError("grow: node is not a leaf");
    int l = num_nodes();
    int r = l + 1;
    TreeNode left, right;
    left.parent = right.parent = leaf_id;
    left.depth = right.depth = nodes_[leaf_id].depth + 1;
    left.mu = mu_left;
    right.mu = mu_right;
    nodes_.push_back(left);
    nodes_.push_back(right);
    nodes_[leaf_id].left = l;
    nodes_[leaf_id].right = r;
    nodes_[leaf_id].var = var;
    nodes_[leaf_id].cut = cut;
    nodes_[leaf_id].mu = 0.0;
}

void DecisionTree::prune(int nog_id)
{
    const auto& nd = nodes_[nog_id];
    if (nd.is_leaf() || !nodes_[nd.left].is_leaf() || !nodes_[nd.right].is_leaf())
        throw InternalError("prune: node has grandchildren or is a leaf");
    nodes_[nog_id].left = nodes_[nog_id].right = -1;
    nodes_[nog_id].var = -1;
    nodes_[nog_id].mu = 0.0;

    // compact: preorder copy of reachable nodes
    std::vector<TreeNode> fresh;
    fresh.reserve(nodes_.size() - 2);
    struct Rec {
        const std::vector<TreeNode>& src;
        std::vector<TreeNode>& dst;
        int copy(int id, int parent)
        {
            int nid = static_cast<int>(dst.size());
            dst.push_back(src[id]);
            dst[nid].parent = parent;
            if (!src[id].is_leaf()) {
                dst[nid].left = copy(src[id].left, nid);
                dst[nid].right = copy(src[id].right, nid);
            }
            return nid;
        }
    } rec{nodes_, fresh};
    rec.copy(0, -1);
    nodes_ = std::move(fresh);
}

void DecisionTree::change(int node_id, int var, double cut)
{
    if (nodes_[node_id].is_leaf())
        throw InternalError("change: node is a leaf");
    nodes_[node_id].var = var;
    nodes_[node_id].cut = cut;
}

int DecisionTree::max_depth() const
{
    int d = 0;
    for (const auto& nd : nodes_)
        d = std::max(d, nd.depth);
    return d;
}

double Forest::evaluate(const double* x) const
{
    double s = 0.0;
    for (const auto& t : trees)
        s += t.evaluate(x);
    return s;
}

double Forest::evaluate(const std::vector<double>& x) const
{
    if (static_cast<int>(x.size()) != dim)
        throw InternalError("Forest::evaluate: dimension mismatch");
    return evaluate(x.data());
}

double node_split_probability(int depth, const BartPrior& prior)
{
    if (depth < 0)
        throw InternalError("node_split_probability: negative depth");
    return prior.alpha * std::pow(1.0 + depth, -prior.beta);
}

CutpointSets cutpoints_from_design(const double* X, int n, int dim, int n_cutpoints)
{
    CutpointSets cuts(dim);
    std::vector<double> col(n);
    for (int v = 0; v < dim; ++v) {
        for (int i = 0; i < n; ++i)
            col[i] = X[static_cast<size_t>(i) * dim + v];
        std::sort(col.begin(), col.end());
        auto& cs = cuts[v];
        cs.reserve(n_cutpoints);
        for (int q = 0; q < n_cutpoints; ++q) {
            int idx = static_cast<int>((q + 0.5) * n / n_cutpoints);
            idx = std::min(idx, n - 1);
            double c = col[idx];
            if (cs.empty() || cs.back() != c)
                cs.push_back(c);
        }
    }
    return cuts;
}

namespace {

int cuts_in_box(const std::vector<double>& cs, double lo, double hi)
{
    auto b = std::upper_bound(cs.begin(), cs.end(), lo);
    auto e = std::lower_bound(cs.begin(), cs.end(), hi);
    return e > b ? static_cast<int>(e - b) : 0;
}

double log_tree_prior_rec(const DecisionTree& t, int id, const BartPrior& prior,
                          const CutpointSets& cuts, std::vector<double>& lo,
                          std::vector<double>& hi)
{
    const TreeNode& nd = t.node(id);
    double ps = node_split_probability(nd.depth, prior);
    if (nd.is_leaf())
        return std::log1p(-ps);

    const auto& cs = cuts[nd.var];
    auto b = std::upper_bound(cs.begin(), cs.end(), lo[nd.var]);
    auto e = std::lower_bound(cs.begin(), cs.end(), hi[nd.var]);
    int avail = static_cast<int>(e - b);
    if (avail <= 0 || !std::binary_search(b, e, nd.cut))
        throw ValidationError("log_tree_prior: split value not in the candidate set");

    double lp = std::log(ps) - std::log(static_cast<double>(cuts.size())) -
                std::log(static_cast<double>(avail));
    double save_hi = hi[nd.var];
    hi[nd.var] = nd.cut;
    lp += log_tree_prior_rec(t, nd.left, prior, cuts, lo, hi);
    hi[nd.var] = save_hi;
    double save_lo = lo[nd.var];
    lo[nd.var] = nd.cut;
    lp += log_tree_prior_rec(t, nd.right, prior, cuts, lo, hi);
    lo[nd.var] = save_lo;
    return lp;
}

} // namespace

double log_tree_prior(const DecisionTree& tree, const BartPrior& prior, const CutpointSets& cuts)
{
    std::vector<double> lo(cuts.size(), -kInf), hi(cuts.size(), kInf);
    return log_tree_prior_rec(tree, 0, prior, cuts, lo, hi);
}

namespace {

void draw_prior_rec(DecisionTree& t, int id, const BartPrior& prior, const CutpointSets& cuts,
                    std::vector<double>& lo, std::vector<double>& hi, Rng& rng)
{
    int depth = t.node(id).depth;
    double ps = node_split_probability(depth, prior);
    std::vector<int> avail_vars;
    for (int v = 0; v < static_cast<int>(cuts.size()); ++v)
        if (cuts_in_box(cuts[v], lo[v], hi[v]) > 0)
            avail_vars.push_back(v);
    if (avail_vars.empty() || rng.uniform() >= ps)
        return;
    int var = avail_vars[rng.uniform_int(static_cast<int>(avail_vars.size()))];
    const auto& cs = cuts[var];
    auto b = std::upper_bound(cs.begin(), cs.end(), lo[var]);
    auto e = std::lower_bound(cs.begin(), cs.end(), hi[var]);
    double cut = *(b + rng.uniform_int(static_cast<int>(e - b)));
    t.grow(id, var, cut, 0.0, 0.0);

    double save_hi = hi[var];
    hi[var] = cut;
    draw_prior_rec(t, t.node(id).left, prior, cuts, lo, hi, rng);
    hi[var] = save_hi;
    double save_lo = lo[var];
    lo[var] = cut;
    draw_prior_rec(t, t.node(id).right, prior, cuts, lo, hi, rng);
    lo[var] = save_lo;
}

} // namespace

DecisionTree draw_tree_from_prior(const BartPrior& prior, const CutpointSets& cuts, Rng& rng)
{
    DecisionTree t;
    std::vector<double> lo(cuts.size(), -kInf), hi(cuts.size(), kInf);
    draw_prior_rec(t, 0, prior, cuts, lo, hi, rng);
    return t;
}

std::vector<PartitionCell> induced_partition(const Forest& f, int dimension)
{
    std::vector<double> cutvals;
    for (const auto& t : f.trees)
        for (int id = 0; id < t.num_nodes(); ++id) {
            const auto& nd = t.node(id);
            if (!nd.is_leaf()) {
                if (nd.var != dimension)
                    throw ConfigError("induced_partition: forest splits on another dimension");
                cutvals.push_back(nd.cut);
            }
        }
    std::sort(cutvals.begin(), cutvals.end());
    cutvals.erase(std::unique(cutvals.begin(), cutvals.end()), cutvals.end());

    std::vector<PartitionCell> cells;
    const int m = static_cast<int>(cutvals.size());
    std::vector<double> x(std::max(f.dim, 1), 0.0);
    for (int i = 0; i <= m; ++i) {
        PartitionCell c;
        c.lo = (i == 0) ? -kInf : cutvals[i - 1];
        c.hi = (i == m) ? kInf : cutvals[i];
        double rep = (i < m) ? cutvals[i] : (m > 0 ? cutvals[m - 1] + 1.0 : 0.0);
        x[dimension] = rep;
        c.mu_sum = f.evaluate(x.data());
        cells.push_back(c);
    }
    return cells;
}

std::vector<double> partial_residuals(const std::vector<double>& targets, const Forest& f,
                                      const double* X, int n, int s)
{
    std::vector<double> r(targets);
    for (int k = 0; k < f.size(); ++k) {
        if (k == s)
            continue;
        for (int i = 0; i < n; ++i)
            r[i] -= f.trees[k].evaluate(X + static_cast<size_t>(i) * f.dim);
    }
    return r;
}

BartSampler::BartSampler(int n, int dim, const BartPrior& prior)
    : n_(n), dim_(dim), prior_(prior), forest_(prior.S, dim)
{
    tree_fit_.assign(prior.S, std::vector<double>(n, 0.0));
    total_fit_.assign(n, 0.0);
}

void BartSampler::set_design(const double* X)
{
    X_ = X;
    // refresh cached fits under the (possibly mutated) design
    std::fill(total_fit_.begin(), total_fit_.end(), 0.0);
    for (int s = 0; s < forest_.size(); ++s) {
        auto& fit = tree_fit_[s];
        for (int i = 0; i < n_; ++i) {
            fit[i] = forest_.trees[s].evaluate(X_ + static_cast<size_t>(i) * dim_);
            total_fit_[i] += fit[i];
        }
    }
}

void BartSampler::set_forest(const Forest& f)
{
    if (f.size() != prior_.S || f.dim != dim_)
        throw InternalError("set_forest: shape mismatch");
    forest_ = f;
    if (X_)
        set_design(X_);
}

void BartSampler::refresh_cutpoints()
{
    cuts_ = cutpoints_from_design(X_, n_, dim_, prior_.n_cutpoints);
}

void BartSampler::refresh_sigma_mu(const std::vector<double>& targets)
{
    double zmin = kInf, zmax = -kInf;
    for (double z : targets) {
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
    }
    double range = std::max(zmax - zmin, 1e-6);
    sigma_mu_ = range / (2.0 * prior_.k_sigma * std::sqrt(static_cast<double>(prior_.S)));
    // center the forest prior N(S mu0, S sigma_mu^2) on the target range;
    // the latent location is free, so the midpoint moves between sweeps
    mu0_ = prior_.mu0 + 0.5 * (zmin + zmax) / static_cast<double>(prior_.S);
}

void BartSampler::assign_rows(const DecisionTree& tree, std::vector<int>& leaf_of_row) const
{
    leaf_of_row.resize(n_);
    for (int i = 0; i < n_; ++i)
        leaf_of_row[i] = tree.leaf_for(X_ + static_cast<size_t>(i) * dim_);
}

double BartSampler::leaf_lml(double nobs, double rsum) const
{
    double s2 = sigma_mu_ * sigma_mu_;
    double prec = 1.0 / s2;
    double b = rsum + mu0_ * prec;
    return -0.5 * std::log1p(nobs * s2) - 0.5 * mu0_ * mu0_ * prec +
           0.5 * b * b / (nobs + prec);
}

int BartSampler::count_cuts_in(int var, double lo, double hi) const
{
    return cuts_in_box(cuts_[var], lo, hi);
}

bool BartSampler::propose_move(DecisionTree& tree, const std::vector<double>& residual, Rng& rng)
{
    std::vector<double> lo, hi;

    // growable leaves: at least one variable with an available cutpoint
    auto leaves = tree.leaves();
    std::vector<int> growable;
    for (int id : leaves) {
        tree.box_at(id, lo, hi, dim_);
        for (int v = 0; v < dim_; ++v)
            if (count_cuts_in(v, lo[v], hi[v]) > 0) {
                growable.push_back(id);
                break;
            }
    }
    auto nogs = tree.nog_nodes();
    bool can_grow = !growable.empty();
    bool can_prune = !nogs.empty();
    bool can_change = !nogs.empty();
    if (!can_grow && !can_prune && !can_change)
        return false;

    auto kind_logprob = [&](bool g, bool p, bool c, Move kind) {
        double tot = (g ? prior_.p_grow : 0.0) + (p ? prior_.p_prune : 0.0) +
                     (c ? prior_.p_change : 0.0);
        double pk = kind == Move::Grow ? prior_.p_grow
                    : kind == Move::Prune ? prior_.p_prune
                                          : prior_.p_change;
        return std::log(pk / tot);
    };

    // pick a move kind among the feasible ones
    double tot = (can_grow ? prior_.p_grow : 0.0) + (can_prune ? prior_.p_prune : 0.0) +
                 (can_change ? prior_.p_change : 0.0);
    double u = rng.uniform() * tot;
    Move move;
    if (can_grow && u < prior_.p_grow)
        move = Move::Grow;
    else if (can_prune && u < (can_grow ? prior_.p_grow : 0.0) + prior_.p_prune)
        move = Move::Prune;
    else
        move = can_change ? Move::Change : (can_grow ? Move::Grow : Move::Prune);

    ++proposals_;
    std::vector<int> leaf_of_row;
    assign_rows(tree, leaf_of_row);

    auto leaf_stats = [&](auto&& member) {
        double n = 0, s = 0;
        for (int i = 0; i < n_; ++i)
            if (member(i)) {
                n += 1.0;
                s += residual[i];
            }
        return std::pair<double, double>(n, s);
    };

    double log_ratio = 0.0;
    DecisionTree proposal = tree;

    if (move == Move::Grow) {
        int leaf = growable[rng.uniform_int(static_cast<int>(growable.size()))];
        tree.box_at(leaf, lo, hi, dim_);
        std::vector<int> avail;
        for (int v = 0; v < dim_; ++v)
            if (count_cuts_in(v, lo[v], hi[v]) > 0)
                avail.push_back(v);
        int var = avail[rng.uniform_int(static_cast<int>(avail.size()))];
        const auto& cs = cuts_[var];
        auto b = std::upper_bound(cs.begin(), cs.end(), lo[var]);
        auto e = std::lower_bound(cs.begin(), cs.end(), hi[var]);
        int ncut = static_cast<int>(e - b);
        double cut = *(b + rng.uniform_int(ncut));

        auto [np, sp] = leaf_stats([&](int i) { return leaf_of_row[i] == leaf; });
        auto [nl, sl] = leaf_stats([&](int i) {
            return leaf_of_row[i] == leaf && X_[static_cast<size_t>(i) * dim_ + var] <= cut;
        });
        double nr = np - nl, sr = sp - sl;

        proposal.grow(leaf, var, cut, 0.0, 0.0);
        int d = tree.node(leaf).depth;
        double ps = node_split_probability(d, prior_);
        double ps_child = node_split_probability(d + 1, prior_);

        log_ratio += kind_logprob(true, true, true, Move::Prune) -
                     std::log(static_cast<double>(proposal.nog_nodes().size()));
        log_ratio -= kind_logprob(can_grow, can_prune, can_change, Move::Grow) -
                     std::log(static_cast<double>(growable.size())) -
                     std::log(static_cast<double>(avail.size())) -
                     std::log(static_cast<double>(ncut));
        log_ratio += std::log(ps) + 2.0 * std::log1p(-ps_child) - std::log1p(-ps) -
                     std::log(static_cast<double>(dim_)) - std::log(static_cast<double>(ncut));
        log_ratio += leaf_lml(nl, sl) + leaf_lml(nr, sr) - leaf_lml(np, sp);
    } else if (move == Move::Prune) {
        int nog = nogs[rng.uniform_int(static_cast<int>(nogs.size()))];
        const TreeNode& nd = tree.node(nog);
        int lchild = nd.left, rchild = nd.right;
        int var = nd.var;
        double cut = nd.cut;

        auto [nl, sl] = leaf_stats([&](int i) { return leaf_of_row[i] == lchild; });
        auto [nr, sr] = leaf_stats([&](int i) { return leaf_of_row[i] == rchild; });
        double np = nl + nr, sp = sl + sr;

        tree.box_at(nog, lo, hi, dim_);
        std::vector<int> avail;
        for (int v = 0; v < dim_; ++v)
            if (count_cuts_in(v, lo[v], hi[v]) > 0)
                avail.push_back(v);
        int ncut = count_cuts_in(var, lo[var], hi[var]);
        if (ncut <= 0)
            ncut = 1; // refreshed candidates no longer cover the old cut

        proposal.prune(nog);
        // count growable leaves of the pruned tree for the reverse move
        auto pleaves = proposal.leaves();
        int n_growable = 0;
        std::vector<double> plo, phi;
        for (int id : pleaves) {
            proposal.box_at(id, plo, phi, dim_);
            for (int v = 0; v < dim_; ++v)
                if (count_cuts_in(v, plo[v], phi[v]) > 0) {
                    ++n_growable;
                    break;
                }
        }
        bool p_can_prune = !proposal.nog_nodes().empty();

        int d = nd.depth;
        double ps = node_split_probability(d, prior_);
        double ps_child = node_split_probability(d + 1, prior_);

        log_ratio += kind_logprob(n_growable > 0, p_can_prune, p_can_prune, Move::Grow) -
                     std::log(static_cast<double>(std::max(n_growable, 1))) -
                     std::log(static_cast<double>(std::max<size_t>(avail.size(), 1))) -
                     std::log(static_cast<double>(ncut));
        log_ratio -= kind_logprob(can_grow, can_prune, can_change, Move::Prune) -
                     std::log(static_cast<double>(nogs.size()));
        log_ratio -= std::log(ps) + 2.0 * std::log1p(-ps_child) - std::log1p(-ps) -
                     std::log(static_cast<double>(dim_)) - std::log(static_cast<double>(ncut));
        log_ratio += leaf_lml(np, sp) - leaf_lml(nl, sl) - leaf_lml(nr, sr);
    } else { // Change
        int nog = nogs[rng.uniform_int(static_cast<int>(nogs.size()))];
        const TreeNode& nd = tree.node(nog);
        tree.box_at(nog, lo, hi, dim_);
        std::vector<int> avail;
        for (int v = 0; v < dim_; ++v)
            if (count_cuts_in(v, lo[v], hi[v]) > 0)
                avail.push_back(v);
        if (avail.empty())
            return false;
        int var = avail[rng.uniform_int(static_cast<int>(avail.size()))];
        const auto& cs = cuts_[var];
        auto b = std::upper_bound(cs.begin(), cs.end(), lo[var]);
        auto e = std::lower_bound(cs.begin(), cs.end(), hi[var]);
        double cut = *(b + rng.uniform_int(static_cast<int>(e - b)));

        int lchild = nd.left, rchild = nd.right;
        auto in_node = [&](int i) { return leaf_of_row[i] == lchild || leaf_of_row[i] == rchild; };
        auto [nl0, sl0] = leaf_stats([&](int i) { return leaf_of_row[i] == lchild; });
        auto [nr0, sr0] = leaf_stats([&](int i) { return leaf_of_row[i] == rchild; });
        auto [nl1, sl1] = leaf_stats([&](int i) {
            return in_node(i) && X_[static_cast<size_t>(i) * dim_ + var] <= cut;
        });
        double nn = nl0 + nr0, sn = sl0 + sr0;
        double nr1 = nn - nl1, sr1 = sn - sl1;

        proposal.change(nog, var, cut);
        // prior and proposal terms cancel exactly for this move
        log_ratio = leaf_lml(nl1, sl1) + leaf_lml(nr1, sr1) - leaf_lml(nl0, sl0) -
                    leaf_lml(nr0, sr0);
    }

    if (std::log(rng.uniform_open()) < log_ratio) {
        tree = std::move(proposal);
        ++accepts_;
        return true;
    }
    return false;
}

void BartSampler::sample_leaves(DecisionTree& tree, const std::vector<double>& residual, Rng& rng)
{
    std::vector<int> leaf_of_row;
    assign_rows(tree, leaf_of_row);
    std::vector<double> cnt(tree.num_nodes(), 0.0), sum(tree.num_nodes(), 0.0);
    for (int i = 0; i < n_; ++i) {
        cnt[leaf_of_row[i]] += 1.0;
        sum[leaf_of_row[i]] += residual[i];
    }
    double prec = 1.0 / (sigma_mu_ * sigma_mu_);
    for (int id : tree.leaves()) {
        double v = 1.0 / (prec + cnt[id]);
        double m = v * (mu0_ * prec + sum[id]);
        tree.node(id).mu = m + std::sqrt(v) * rng.normal();
    }
}

void BartSampler::sweep(const std::vector<double>& targets, Rng& rng)
{
    if (!X_)
        throw InternalError("BartSampler: design not set");
    if (static_cast<int>(targets.size()) != n_)
        throw InternalError("BartSampler: target size mismatch");
    refresh_cutpoints();
    refresh_sigma_mu(targets);

    std::vector<double> residual(n_);
    for (int s = 0; s < forest_.size(); ++s) {
        auto& fit = tree_fit_[s];
        for (int i = 0; i < n_; ++i)
            residual[i] = targets[i] - total_fit_[i] + fit[i];

        DecisionTree& tree = forest_.trees[s];
        propose_move(tree, residual, rng);
        sample_leaves(tree, residual, rng);

        for (int i = 0; i < n_; ++i) {
            double nf = tree.evaluate(X_ + static_cast<size_t>(i) * dim_);
            total_fit_[i] += nf - fit[i];
            fit[i] = nf;
        }
    }
}

namespace {

void write_tree_rec(std::ostream& out, const DecisionTree& t, int id, int& counter)
{
    const TreeNode& nd = t.node(id);
    int my_id = counter++;
    if (nd.is_leaf()) {
        out << my_id << " leaf " << format_double(nd.mu) << "\n";
    } else {
        out << my_id << " split " << nd.var << " " << format_double(nd.cut) << "\n";
        write_tree_rec(out, t, nd.left, counter);
        write_tree_rec(out, t, nd.right, counter);
    }
}

int read_tree_rec(std::istream& in, DecisionTree& t, int id)
{
    int node_id;
    std::string kind;
    if (!(in >> node_id >> kind))
        throw ValidationError("forest: truncated tree block");
    if (kind == "leaf") {
        std::string mu;
        in >> mu;
        t.node(id).mu = parse_double(mu);
        return id;
    }
    if (kind != "split")
        throw ValidationError("forest: unknown node kind '" + kind + "'");
    int var;
    std::string cut;
    in >> var >> cut;
    t.grow(id, var, parse_double(cut), 0.0, 0.0);
    read_tree_rec(in, t, t.node(id).left);
    read_tree_rec(in, t, t.node(id).right);
    return id;
}

} // namespace

void write_forest(std::ostream& out, const Forest& f)
{
    out << "forest " << f.size() << " " << f.dim << "\n";
    for (int s = 0; s < f.size(); ++s) {
        out << "tree " << s << " " << f.trees[s].num_nodes() << "\n";
        int counter = 0;
        write_tree_rec(out, f.trees[s], 0, counter);
    }
    out << "end\n";
}

Forest read_forest(std::istream& in)
{
    std::string tag;
    int S, dim;
    if (!(in >> tag >> S >> dim) || tag != "forest")
        throw ValidationError("forest: bad header");
    Forest f(S, dim);
    for (int s = 0; s < S; ++s) {
        int idx, nnodes;
        if (!(in >> tag >> idx >> nnodes) || tag != "tree" || idx != s)
            throw ValidationError("forest: bad tree header");
        read_tree_rec(in, f.trees[s], 0);
        if (f.trees[s].num_nodes() != nnodes)
            throw ValidationError("forest: node count mismatch");
    }
    if (!(in >> tag) || tag != "end")
        throw ValidationError("forest: missing end marker");
    return f;
}

} // namespace rankdyn
