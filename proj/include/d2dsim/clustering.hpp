#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "d2dsim/geometry.hpp"

namespace d2dsim {

inline constexpr int kNoise = -1;

struct ClusterAssignment {
    std::vector<int> labels;  // kNoise or 0..cluster_count-1
    int cluster_count = 0;

    /// Throws if a label is out of range or some cluster is empty.
    void validate() const;
};

/// Renumber labels 0.. in order of first appearance, keeping kNoise.
ClusterAssignment compact_labels(std::span<const int> labels);

// device_id,label
void write_assignment_csv(std::ostream& out, const ClusterAssignment& a);

// --- K-Means

struct KMeansResult {
    ClusterAssignment assignment;
    std::vector<Point> centroids;
    std::vector<double> inertia_history;  // after each assignment step
    int iterations = 0;
};

/// Lloyd's algorithm from k-means++ seeds. An emptied cluster is re-seeded at
/// the point farthest from its centroid.
KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed, int max_iterations = 300);

double inertia(std::span<const Point> points, std::span<const int> labels, std::span<const Point> centroids);

// --- FuzzyART

/// Per-axis min-max scaling onto [0, 1]. A degenerate axis maps to 0.
struct Normalizer {
    double min_x = 0.0, min_y = 0.0;
    double span_x = 1.0, span_y = 1.0;

    static Normalizer fit(std::span<const Point> points);
    Point forward(const Point& p) const;
    Point inverse(const Point& q) const;
};

struct FuzzyArtConfig {
    /// Negative means derive from the data with calibrated_vigilance().
    double vigilance = -1.0;
    double choice = 0.001;
    double learning = 1.0;
    int max_clusters = -1;  // -1 = unbounded
    int epochs = 1;
    double category_diameter = 400.0;  // meters, used when deriving vigilance

    void validate() const;
};

/// Vigilance that admits a category box whose diagonal spans `diameter`
/// meters (a square box) once mapped through norm.
double calibrated_vigilance(const Normalizer& norm, double diameter);

struct FuzzyArtResult {
    ClusterAssignment assignment;
    std::vector<std::array<double, 4>> weights;  // complement-coded boxes
    double vigilance = 0.0;
};

FuzzyArtResult fuzzy_art(std::span<const Point> points, const FuzzyArtConfig& cfg = {});

// --- DBSCAN

struct DbscanConfig {
    double eps = 200.0;
    int min_pts = 2;  // neighborhood size counting the point itself

    void validate() const;
};

/// Clusters are numbered in discovery order scanning ids upward. Border
/// points go to the first cluster that reaches them.
ClusterAssignment dbscan(std::span<const Point> points, const DbscanConfig& cfg = {});

// --- MEC

struct MecConfig {
    int k = 100;
    int max_iterations = 100;   // full passes over the points
    double convergence = 1e-9;  // minimum objective drop to accept a move
    int neighbors = 5;
    double neighbor_radius = 200.0;

    void validate() const;
};

struct MecResult {
    ClusterAssignment assignment;
    std::vector<double> objective_history;  // initial value, then after each pass
    int iterations = 0;
    int moves = 0;
};

/// Minimum-entropy clustering seeded by K-Means. The objective is the mean
/// Shannon entropy of the label histogram over each point and its nearest
/// neighbors (up to `neighbors` of them within `neighbor_radius`). Points are
/// relabeled greedily while that strictly lowers the objective. k is capped at
/// the point count; emptied clusters are dropped.
MecResult mec(std::span<const Point> points, const MecConfig& cfg, std::uint64_t seed);

/// The MEC objective for a given labeling.
double mec_objective(std::span<const Point> points, std::span<const int> labels, const MecConfig& cfg);

}  // namespace d2dsim
