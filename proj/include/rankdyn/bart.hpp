#pragma once

#include <iosfwd>
#include <vector>

#include "rankdyn/errors.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

struct TreeNode {
    int left = -1;   // -1 for leaves
    int right = -1;
    int parent = -1;
    int depth = 0;
    int var = -1;    // splitting variable (interior nodes)
    double cut = 0.0;
    double mu = 0.0; // leaf parameter
    bool is_leaf() const { return left < 0; }
};

/// Binary regression tree. Interior nodes carry (var, cut) rules with the
/// left-inclusive convention x[var] <= cut; leaves carry the parameter mu.
class DecisionTree {
public:
    DecisionTree(); // single leaf, mu = 0

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_leaves() const;
    const TreeNode& node(int id) const { return nodes_[id]; }
    TreeNode& node(int id) { return nodes_[id]; }

    /// Routes x down the tree and returns the leaf node id.
    int leaf_for(const double* x) const;
    double evaluate(const double* x) const { return nodes_[leaf_for(x)].mu; }

    std::vector<int> leaves() const;
    std::vector<int> internal_nodes() const;
    /// Interior nodes whose children are both leaves ("no-grandchildren").
    std::vector<int> nog_nodes() const;

    /// Open box (lo, hi) per variable at node `id`, induced by ancestor rules.
    void box_at(int id, std::vector<double>& lo, std::vector<double>& hi, int dim) const;

    void grow(int leaf_id, int var, double cut, double mu_left, double mu_right);
    void prune(int nog_id);
    void change(int node_id, int var, double cut);

    int max_depth() const;

private:
    std::vector<TreeNode> nodes_; // node 0 is the root
};

/// Sum of S trees over a shared covariate dimension.
struct Forest {
    int dim = 0;
    std::vector<DecisionTree> trees;

    Forest() = default;
    Forest(int S, int dim_) : dim(dim_), trees(S) {}
    int size() const { return static_cast<int>(trees.size()); }
    double evaluate(const double* x) const;
    double evaluate(const std::vector<double>& x) const;
};

struct BartPrior {
    double alpha = 0.95;     // split probability scale
    double beta = 2.0;       // depth penalty
    double k_sigma = 2.0;    // leaf prior spread multiplier
    int S = 50;              // tree count
    int n_cutpoints = 100;   // cutpoint candidates per variable
    double p_grow = 0.25, p_prune = 0.25, p_change = 0.50;
    double mu0 = 0.0;        // leaf prior mean offset
};

/// Probability that a node at depth d splits: alpha * (1 + d)^(-beta).
double node_split_probability(int depth, const BartPrior& prior);

/// Candidate splitting values, one sorted ascending list per variable.
using CutpointSets = std::vector<std::vector<double>>;

/// n_cutpoints quantiles of each design column, deduplicated.
CutpointSets cutpoints_from_design(const double* X, int n, int dim, int n_cutpoints);

/// Log prior probability of a tree structure: split/no-split terms, uniform
/// variable choice 1/K_x, uniform cutpoint choice over the candidates
/// available inside each node's box. Throws if a split value is not in the
/// candidate set.
double log_tree_prior(const DecisionTree& tree, const BartPrior& prior,
                      const CutpointSets& cuts);

/// Tree draw from the regularization prior (used by prior-predictive tests).
DecisionTree draw_tree_from_prior(const BartPrior& prior, const CutpointSets& cuts, Rng& rng);

/// Scalar-forest partition cell: the interval (lo, hi] (last cell (lo, inf))
/// on which the whole forest is constant, with the summed coefficient.
struct PartitionCell {
    double lo, hi;  // lo may be -inf, hi may be +inf
    double mu_sum;
    bool contains(double x) const { return x > lo && x <= hi; }
};

/// Nonempty intersection cells of a forest splitting only on `dimension`.
/// Throws if any tree splits elsewhere.
std::vector<PartitionCell> induced_partition(const Forest& f, int dimension);

/// R_s = targets - sum_{k != s} g_k(X_row).
std::vector<double> partial_residuals(const std::vector<double>& targets, const Forest& f,
                                      const double* X, int n, int s);

/// One-tree-at-a-time sampler: Metropolis-Hastings over GROW/PRUNE/CHANGE
/// with leaves integrated out under the conjugate normal prior (unit
/// observation noise), followed by conjugate leaf draws. Caches per-tree
/// fits so partial residuals cost O(n) per tree.
class BartSampler {
public:
    BartSampler(int n, int dim, const BartPrior& prior);

    /// Row-major n x dim design; pointer is retained. Call again after
    /// mutating the design (e.g. refreshed lag columns).
    void set_design(const double* X);

    /// One Gibbs pass over all S trees: refresh cutpoints and the leaf
    /// prior spread from the current targets, then MH + leaf draws per tree.
    void sweep(const std::vector<double>& targets, Rng& rng);

    const Forest& forest() const { return forest_; }
    void set_forest(const Forest& f);

    double fitted(int row) const { return total_fit_[row]; }
    const std::vector<double>& fitted_values() const { return total_fit_; }

    double sigma_mu() const { return sigma_mu_; }
    double mu_leaf() const { return mu0_; }
    double acceptance_rate() const
    {
        return proposals_ ? static_cast<double>(accepts_) / proposals_ : 0.0;
    }

private:
    enum class Move { Grow, Prune, Change };

    void refresh_cutpoints();
    void refresh_sigma_mu(const std::vector<double>& targets);
    void assign_rows(const DecisionTree& tree, std::vector<int>& leaf_of_row) const;
    bool propose_move(DecisionTree& tree, const std::vector<double>& residual, Rng& rng);
    void sample_leaves(DecisionTree& tree, const std::vector<double>& residual, Rng& rng);
    double leaf_lml(double nobs, double rsum) const;
    int count_cuts_in(int var, double lo, double hi) const;

    int n_, dim_;
    BartPrior prior_;
    const double* X_ = nullptr;
    Forest forest_;
    CutpointSets cuts_;
    double sigma_mu_ = 1.0;
    double mu0_ = 0.0;
    std::vector<std::vector<double>> tree_fit_; // S x n
    std::vector<double> total_fit_;             // n
    long proposals_ = 0, accepts_ = 0;
};

/// Line-oriented forest serialization: one tree per block, preorder node
/// listing `id kind(var cut | mu)`; decimals round-trip exactly.
void write_forest(std::ostream& out, const Forest& f);
Forest read_forest(std::istream& in);

} // namespace rankdyn
