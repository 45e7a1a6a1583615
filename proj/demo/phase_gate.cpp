// One-exciton qubit: a cycle with phi(T) = pi/2 applies diag(i, -i) on
// (E'^+|0>, D'^+|0>).
#include <cstdio>

#include <holomem/holomem.hpp>

int main()
{
    using namespace holomem;
    SystemParams p;
    const auto design = design_phase_schedule(p, kPi / 2);
    const auto gate = qubit_gate(p, design.schedule);
    std::printf("ideal gate diag: (%.6f%+.6fi, %.6f%+.6fi)\n", gate(0, 0).real(), gate(0, 0).imag(),
                gate(1, 1).real(), gate(1, 1).imag());

    const auto exact = qubit_gate_exact(p, design.schedule);
    std::printf("exact gate fidelity %.6f, leakage %.2e\n", exact.gate_fidelity, exact.leakage);
    for (int i = 0; i < 2; ++i)
        std::printf("  [%+.5f%+.5fi  %+.5f%+.5fi]\n", exact.gate(i, 0).real(), exact.gate(i, 0).imag(),
                    exact.gate(i, 1).real(), exact.gate(i, 1).imag());
    return 0;
}
