// Stores a two-photon superposition, rotates the dark manifold through a
// full 2 pi holonomy angle and reads it back out.
#include <cstdio>

#include <holomem/holomem.hpp>

int main()
{
    using namespace holomem;
    SystemParams p; // g sqrt(N) = 1, three-photon resonance

    const auto design = design_phase_schedule(p, 2.0 * kPi);
    const auto& s = design.schedule;
    std::printf("designed cycle: %d stroke pairs, dkappa = %.6f, T = %.1f, max margin = %.2e\n", design.strokes,
                design.delta_kappa, s.duration(), design.max_margin);

    const auto input = PhotonState::normalized({{0.6, 0.0}, {0.0, 0.6}, {0.5, 0.2}});

    const auto stored = run_storage(p, s, input, RunMode::adiabatic);
    std::printf("at tau = %.1f: photon occupancy %.2e, atomic occupancy %.4f\n", stored.tau,
                stored.photon_occupancy, stored.atomic_occupancy);

    const auto adiabatic = run_cycle(p, s, input, RunMode::adiabatic);
    std::printf("phi(T) = %.12f, j = %ld, adiabatic fidelity 1 - %.2e\n", adiabatic.retrieval.phi,
                adiabatic.retrieval.j, 1.0 - adiabatic.fidelity);

    const auto exact = run_cycle(p, s, input, RunMode::exact);
    std::printf("exact evolution fidelity %.6f (%zu steps)\n", exact.fidelity, exact.stats.accepted);
    return 0;
}
