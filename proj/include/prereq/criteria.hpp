#ifndef PREREQ_CRITERIA_HPP
#define PREREQ_CRITERIA_HPP

#include <array>
#include <optional>
#include <string>

#include "prereq/corpus.hpp"

namespace prereq {

// The ten binary criteria, in their fixed catalog order.
enum class CriterionId : int {
    TemO = 0,         // temporal order of first occurrence in the material
    HL_A = 1,         // c1 hyperlinked in c2's article
    HL_Ab = 2,        // c1 hyperlinked in c2's abstract
    HL_RCA = 3,       // c1 hyperlinked in the abstracts of c2's related concepts
    RefD = 4,         // reference-distance asymmetry over related concepts
    IOLR = 5,         // inbound/outbound link ratio comparison
    CatCon = 6,       // c1 is a category of c2
    SuperCatCon = 7,  // c1 is a direct super-category of c2
    CMH = 8,          // course-hierarchy order of first occurrence
    BERTropy = 9,     // topic-entropy difference
};

inline constexpr int kCriterionCount = 10;

inline constexpr std::array<CriterionId, kCriterionCount> kAllCriteria = {
    CriterionId::TemO,   CriterionId::HL_A,   CriterionId::HL_Ab,       CriterionId::HL_RCA,
    CriterionId::RefD,   CriterionId::IOLR,   CriterionId::CatCon,      CriterionId::SuperCatCon,
    CriterionId::CMH,    CriterionId::BERTropy,
};

const std::string& criterion_name(CriterionId id);
std::optional<CriterionId> criterion_from_name(const std::string& name);

enum class EntropyLogBase { Natural, Base2 };

struct CriteriaConfig {
    double refd_theta = 0.6;
    double bertropy_theta = 1.33;
    EntropyLogBase entropy_log_base = EntropyLogBase::Natural;

    // Throws ValidationError when a threshold is out of range.
    void validate() const;
};

// Result of one criterion on one ordered pair. A criterion whose evidence is
// missing abstains: applicable=false, fired=false, and it contributes nothing
// to either voting array.
struct CriterionOutcome {
    bool fired = false;
    bool applicable = false;
    std::optional<double> raw_score;  // RefD value, entropy difference, IOL difference
};

// All evaluators answer "does c1 look like a prerequisite of c2". They throw
// ValidationError when either id is unknown and require c1 != c2.
CriterionOutcome evaluate_temo(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_hl_a(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_hl_ab(const ConceptId& c1, const ConceptId& c2,
                                const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_hl_rca(const ConceptId& c1, const ConceptId& c2,
                                 const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_refd(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_iolr(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_catcon(const ConceptId& c1, const ConceptId& c2,
                                 const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_supercatcon(const ConceptId& c1, const ConceptId& c2,
                                      const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_cmh(const ConceptId& c1, const ConceptId& c2,
                              const CorpusSnapshot& snap, const CriteriaConfig& cfg);
CriterionOutcome evaluate_bertropy(const ConceptId& c1, const ConceptId& c2,
                                   const CorpusSnapshot& snap, const CriteriaConfig& cfg);

CriterionOutcome evaluate_criterion_pair(CriterionId id, const ConceptId& c1, const ConceptId& c2,
                                         const CorpusSnapshot& snap, const CriteriaConfig& cfg);

// Signed reference distance in [-1, 1]. A value in (-1, -theta) asserts that
// c1 is a prerequisite of c2; (theta, 1) asserts the reverse. Antisymmetric in
// its arguments. nullopt when either side's weight mass is zero.
//
// The sum ranges over the union of both concepts' related sets: each related
// concept contributes r(x, c) = [c in article_links(x)] weighted by its stored
// similarity to the anchor (0 when x is not related to the anchor).
std::optional<double> refd_value(const ConceptId& c1, const ConceptId& c2,
                                 const CorpusSnapshot& snap);

// Shannon entropy of a concept's topic distribution (terms with P(x)=0
// contribute 0); nullopt when the distribution is absent.
std::optional<double> entropy(const ConceptId& c, const CorpusSnapshot& snap,
                              const CriteriaConfig& cfg);

// Outcome of all ten criteria on one unordered pair, both directions.
// a1[k] covers c1 -> c2, a2[k] covers c2 -> c1; abstentions leave both slots 0.
// Raw RefD / entropy-difference / IOL-difference values are kept so thresholds
// can be re-applied without touching the corpus again.
struct CriterionVote {
    std::pair<ConceptId, ConceptId> pair;
    std::array<bool, kCriterionCount> a1{};
    std::array<bool, kCriterionCount> a2{};
    std::array<bool, kCriterionCount> applicable1{};
    std::array<bool, kCriterionCount> applicable2{};
    std::optional<double> refd;          // refd_value(c1, c2)
    std::optional<double> entropy_diff;  // entropy(c1) - entropy(c2)
    std::optional<double> iol_diff;      // IOL(c1) - IOL(c2), +-inf possible
};

CriterionVote evaluate_all(const ConceptId& c1, const ConceptId& c2, const CorpusSnapshot& snap,
                           const CriteriaConfig& cfg);

// Recomputes the RefD / BERTropy slots of a cached vote under new thresholds;
// all other slots are untouched. Used by threshold sweeps.
void rethreshold_refd(CriterionVote& vote, double refd_theta);
void rethreshold_bertropy(CriterionVote& vote, double bertropy_theta);

}  // namespace prereq

#endif  // PREREQ_CRITERIA_HPP
