#include "subtraj/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace subtraj {

namespace {

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd r;
    if (xs.empty()) return r;
    double sum = 0.0;
    for (const double x : xs) sum += x;
    r.mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (const double x : xs) sq += (x - r.mean) * (x - r.mean);
    r.std_dev = std::sqrt(sq / static_cast<double>(xs.size()));
    return r;
}

} // namespace

Thresholds resolve_thresholds(const std::vector<Subtraj>& st, const std::vector<SPRecord>& sp,
                              const ClusterParams& cp) {
    Thresholds th;
    std::vector<double> sims;
    for (const auto& rec : sp)
        for (const auto& nb : rec.adj) sims.push_back(nb.sim);
    if (!sims.empty()) {
        const auto s = mean_std(sims);
        th.alpha_value = s.mean + cp.alpha_sigma * s.std_dev;
    }
    std::vector<double> votes;
    votes.reserve(st.size());
    for (const auto& s : st) votes.push_back(s.voting);
    if (!votes.empty()) {
        const auto v = mean_std(votes);
        th.k_value = v.mean + cp.k_sigma * v.std_dev;
    }
    return th;
}

PartitionClustering cluster_partition(std::uint32_t pid, const std::vector<Subtraj>& st,
                                      const std::vector<SPRecord>& sp, const Thresholds& th) {
    PartitionClustering pc;
    pc.pid = pid;
    pc.thresholds = th;

    std::unordered_map<SubId, const SPRecord*, SubIdHash> adjacency;
    adjacency.reserve(sp.size());
    for (const auto& rec : sp) adjacency.emplace(rec.sub, &rec);

    // descending voting, ties by ascending sub id
    std::vector<const Subtraj*> order;
    order.reserve(st.size());
    for (const auto& s : st) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const Subtraj* a, const Subtraj* b) {
        if (a->voting != b->voting) return a->voting > b->voting;
        return a->id() < b->id();
    });

    enum class State { Unassigned, Repr, Member, Outlier };
    std::unordered_map<SubId, State, SubIdHash> state;
    state.reserve(st.size());
    for (const auto& s : st) state.emplace(s.id(), State::Unassigned);

    for (const Subtraj* cand : order) {
        const SubId id = cand->id();
        auto& s = state.at(id);
        if (s == State::Repr || s == State::Member) continue;
        if (cand->voting < th.k_value) {
            s = State::Outlier;
            continue;
        }
        s = State::Repr;
        pc.representatives.push_back(id);

        auto adj_it = adjacency.find(id);
        if (adj_it == adjacency.end()) continue;
        for (const auto& nb : adj_it->second->adj) {
            auto nb_state_it = state.find(nb.other);
            if (nb_state_it == state.end()) continue; // not in this partition
            auto& ns = nb_state_it->second;
            if (ns == State::Repr) continue;
            if (ns == State::Member) {
                auto& membership = pc.memberships.at(nb.other);
                if (nb.sim > membership.sim) {
                    membership.rep = id;
                    membership.sim = nb.sim;
                }
                continue;
            }
            if (nb.sim >= th.alpha_value) {
                ns = State::Member;
                pc.memberships[nb.other] = PartitionClustering::Membership{id, nb.sim};
            } else {
                ns = State::Outlier;
            }
        }
    }

    for (const auto& s : st) {
        const SubId id = s.id();
        switch (state.at(id)) {
            case State::Repr: pc.roles[id] = Role::Representative; break;
            case State::Member: pc.roles[id] = Role::Member; break;
            default: pc.roles[id] = Role::Outlier; break;
        }
    }
    return pc;
}

namespace {

struct FoldedState {
    Role role = Role::Outlier;
    // membership details when role == Member
    SubId rep;
    double sim = 0.0;
    std::uint32_t pid = 0;
};

/// Applies the six pairwise cases to a time-ordered state chain.
FoldedState fold_states(const std::vector<FoldedState>& chain) {
    FoldedState cur = chain.front();
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const FoldedState& nxt = chain[i];
        if (cur.role == Role::Outlier && nxt.role == Role::Outlier) {
            // (a) duplicate outlier record dropped
            continue;
        }
        if (cur.role == Role::Representative && nxt.role == Role::Representative) {
            // (b) clusters merged; the representative id is the same sub
            continue;
        }
        if (cur.role == Role::Member && nxt.role == Role::Member) {
            // (c) keep the membership with the larger similarity
            if (!(cur.sim > nxt.sim)) cur = nxt;
            continue;
        }
        if (cur.role == Role::Representative || nxt.role == Role::Representative) {
            // (d) representative wins over membership, (e) over outlier
            cur = cur.role == Role::Representative ? cur : nxt;
            continue;
        }
        // (f) member vs outlier: the outlier record is removed
        cur = cur.role == Role::Member ? cur : nxt;
    }
    return cur;
}

} // namespace

ClusteringResult refine_results(const std::vector<PartitionClustering>& parts,
                                const std::unordered_map<SubId, bool, SubIdHash>& intersecting) {
    // gather the state chain of every subtrajectory, partitions in time order
    std::map<SubId, std::vector<FoldedState>> chains;
    for (const auto& pc : parts) {
        for (const auto& [id, role] : pc.roles) {
            if (auto it = intersecting.find(id); it == intersecting.end())
                throw std::logic_error("subtrajectory state without replication record");
            FoldedState fs;
            fs.role = role;
            fs.pid = pc.pid;
            if (role == Role::Member) {
                const auto& m = pc.memberships.at(id);
                fs.rep = m.rep;
                fs.sim = m.sim;
            }
            chains[id].push_back(fs);
        }
    }

    ClusteringResult result;
    result.partition_thresholds.resize(parts.size());
    for (const auto& pc : parts) result.partition_thresholds[pc.pid] = pc.thresholds;

    std::map<SubId, std::vector<ClusteringResult::Member>> clusters;
    for (auto& [id, chain] : chains) {
        std::sort(chain.begin(), chain.end(),
                  [](const FoldedState& a, const FoldedState& b) { return a.pid < b.pid; });
        const FoldedState final_state = fold_states(chain);
        switch (final_state.role) {
            case Role::Representative:
                clusters.try_emplace(id); // merged across partitions, same id
                break;
            case Role::Member:
                clusters[final_state.rep].push_back(
                    ClusteringResult::Member{id, final_state.sim, final_state.pid});
                break;
            case Role::Outlier:
                result.outliers.push_back(id);
                break;
        }
    }

    result.clusters.reserve(clusters.size());
    for (auto& [rep, members] : clusters) {
        std::sort(members.begin(), members.end(),
                  [](const ClusteringResult::Member& a, const ClusteringResult::Member& b) {
                      return a.sub < b.sub;
                  });
        result.clusters.push_back(ClusteringResult::Cluster{rep, std::move(members)});
    }
    std::sort(result.outliers.begin(), result.outliers.end());
    return result;
}

double sscr(const ClusteringResult& result) {
    double sum = 0.0;
    for (const auto& c : result.clusters)
        for (const auto& m : c.members) sum += m.sim;
    return sum;
}

RmseReport rmse(const ClusteringResult& result, const RelationIndex& idx) {
    RmseReport rep;
    double sq = 0.0;
    for (const auto& c : result.clusters) {
        const auto& rsub = idx.sub_containing(c.representative.traj, c.representative.first);
        for (const auto& m : c.members) {
            const auto& msub = idx.sub_containing(m.sub.traj, m.sub.first);
            for (const auto& p : matched_pairs(idx, rsub, msub)) {
                sq += p.dist * p.dist;
                ++rep.pair_count;
            }
        }
    }
    rep.value = rep.pair_count == 0 ? 0.0
                                    : std::sqrt(sq / static_cast<double>(rep.pair_count));
    return rep;
}

std::vector<Lemma1Violation> check_lemma1(const ClusteringResult& result,
                                          const RelationIndex& idx, double eps_sp) {
    std::vector<Lemma1Violation> violations;
    for (const auto& c : result.clusters) {
        const auto& rsub = idx.sub_containing(c.representative.traj, c.representative.first);
        for (const auto& m : c.members) {
            const auto& msub = idx.sub_containing(m.sub.traj, m.sub.first);
            const auto pairs = matched_pairs(idx, rsub, msub);
            if (pairs.size() != std::min(rsub.card, msub.card)) continue;
            double sum = 0.0;
            for (const auto& p : pairs) sum += p.dist;
            const double mean_dist = sum / static_cast<double>(pairs.size());
            const double alpha = result.partition_thresholds[m.pid].alpha_value;
            const double bound = eps_sp * (1.0 - alpha) + 1e-9;
            if (mean_dist > bound)
                violations.push_back(
                    Lemma1Violation{c.representative, m.sub, mean_dist, bound});
        }
    }
    return violations;
}

} // namespace subtraj
