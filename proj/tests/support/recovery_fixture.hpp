#pragma once

#include <array>
#include <cstdint>

// Fits of patterns simulated from exp(4 + 1.2x - 0.8t) on the unit box with
// lambda_max 182, terms 1,x,t and a (15,15,15) grid. Recorded from the first
// run and frozen; a change here means the simulation or the fit changed.
namespace fixture {

inline constexpr std::array<double, 3> kRecoveryTruth{4.0, 1.2, -0.8};
inline constexpr double kRecoveryLambdaMax = 182.0;

struct RecoveryCase {
    std::uint64_t seed;
    std::size_t n_points;
    std::array<double, 3> estimate;
    std::array<double, 3> std_error;
};

inline constexpr std::array<RecoveryCase, 10> kRecoveryCases{{
    {1, 65, {4.048532082206135, 0.8330427538207479, -0.6763841149210307}, {0.3389045289596979, 0.43813618022046236, 0.4355116470607953}},
    {2, 72, {3.9112155941261526, 0.986668697950063, -0.34586287724450954}, {0.3323966378432805, 0.4189909938989253, 0.41038781897530896}},
    {3, 76, {3.3461601928917055, 2.281655821483829, -0.7771924320981286}, {0.3691469179069218, 0.44961072097278526, 0.40425259192868185}},
    {4, 86, {4.526025671529251, 0.6491229586700812, -0.89318640840969}, {0.286498115035328, 0.3783503443166027, 0.3818704182246266}},
    {5, 74, {3.767688702904969, 1.1647479639998852, -0.2068038320402283}, {0.3362821860769235, 0.41725844184594646, 0.4040034264908971}},
    {6, 76, {3.814452074587785, 1.5382948345562235, -0.743922139083447}, {0.3370190617016262, 0.4218554080502529, 0.4037429859152888}},
    {7, 63, {4.019794001749912, 1.3956107622667784, -1.488494572941016}, {0.35445710525116847, 0.4587360150051039, 0.4615302096924113}},
    {8, 83, {4.098900601387748, 0.8019522414966856, -0.21913269279555456}, {0.30635712501769696, 0.38719238424750385, 0.3815276496876}},
    {9, 59, {3.8199352446352863, 1.42637924922737, -1.1942123318098343}, {0.3711714990450842, 0.4749905721192831, 0.4681509943959411}},
    {10, 73, {4.661169021935167, 0.42147030814438796, -1.320160825967737}, {0.2986570589711538, 0.4081464172007405, 0.424072807960517}},
}};

}  // namespace fixture
