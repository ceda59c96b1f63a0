// Generated by tests/oracle/bv_oracle.py. Do not edit.
#ifndef PECSIM_TESTS_ORACLE_VALUES_HPP
#define PECSIM_TESTS_ORACLE_VALUES_HPP

namespace oracle {

// Secret 1000, f = (0.96, 0.95, 0.94, 0.93, 0.92), x_C = x_T = 0.017.
inline constexpr double kGoldenK0[] = {0.062245167690751904, 0.0061200547092480533, 0.71829112670924677, 0.070623650890751899, 0.0039730958100479977, 0.00039064178995200382, 0.045848369789951965, 0.0045078926100479977, 0.003276061457407998, 0.00032210814259200308, 0.037804796142591975, 0.0037170342574079983, 0.00020911030579200007, 2.0560094208000216e-05, 0.0024130720942080008, 0.00023725750579200013, 0.0025935486537813318, 0.00025500227955200247, 0.029928796946218646, 0.0029426521204479984, 0.00016554565875200007, 1.6276741248000173e-05, 0.0019103487412480001, 0.00018782885875200006, 0.00013650256072533337, 1.3421172608000142e-05, 0.0015751998392746671, 0.00015487642739200007, 8.7129294080000127e-06, 8.5667059200000999e-07, 0.00010054467059200012, 9.8857294080000127e-06};
// Same noise, CNOT decorated with (Y, Z), X before measuring qubits 1 and 4 (k = 299).
inline constexpr double kGoldenK299[] = {0.037804796142591975, 0.0037170342574079983, 0.003276061457407998, 0.00032210814259200308, 0.0024130720942080008, 0.00023725750579200013, 0.00020911030579200007, 2.0560094208000216e-05, 0.71829112670924677, 0.070623650890751899, 0.062245167690751904, 0.0061200547092480533, 0.045848369789951965, 0.0045078926100479977, 0.0039730958100479977, 0.00039064178995200382, 0.0015751998392746671, 0.00015487642739200007, 0.00013650256072533337, 1.3421172608000142e-05, 0.00010054467059200012, 9.8857294080000127e-06, 8.7129294080000127e-06, 8.5667059200000999e-07, 0.029928796946218646, 0.0029426521204479984, 0.0025935486537813318, 0.00025500227955200247, 0.0019103487412480001, 0.00018782885875200006, 0.00016554565875200007, 1.6276741248000173e-05};
inline constexpr double kCnotEta017[] = {1.0350911008786703, -0.0058989435852956976, -0.0058989435852956941, -0.0058989435852957713, -0.0058989435852956941, 3.3617848122690513e-05, 3.361784812269054e-05, 3.3617848122690595e-05, -0.005898943585295695, 3.3617848122690486e-05, 3.3617848122690527e-05, 3.3617848122691272e-05, -0.0058989435852957696, 3.3617848122691746e-05, 3.3617848122691232e-05, 3.3617848122579572e-05};
inline constexpr double kCnotEta03_08[] = {1.123600746268657, -0.030783582089552258, -0.030783582089552276, -0.030783582089552272, -0.011349502487562051, 0.00031094527363188784, 0.00031094527363188774, 0.00031094527363188633, -0.011349502487562051, 0.00031094527363188784, 0.00031094527363188795, 0.000310945273631886, -0.011349502487562026, 0.00031094527363188297, 0.00031094527363188405, 0.00031094527363197957};
inline constexpr double kMitigatedGolden[] = {0.99999999999999789, 0.99999999999999867, 0.99999999999999878, -0.999999999999996, 0.99999999999999889};
// Marginal law of qubits (3, 4) with qubits 0..2 noiseless, outcome index 2 b3 + b4.
inline constexpr double kBlockLaw[] = {0.072607745066666562, 0.0071389216000000639, 0.83787225493333206, 0.082381078399999891};
// Exhaustive search over f in {0.90..0.94}^2, x in {0, 0.01, 0.02, 0.03}^2 for the
// law at (0.927, 0.913, 0.012, 0.021).
inline constexpr double kGridTargets[] = {0.071963438751999967, 0.0078685612480000958, 0.82947256124799873, 0.090695438752000049};
inline constexpr double kGridBestTheta[] = {0.92000000000000004, 0.90000000000000002, 0, 0};
inline constexpr double kGridBestMse = 3.8889295492766813e-06;
inline constexpr double kGridSecondMse = 4.9539990107817199e-06;

}  // namespace oracle

#endif
