# SER and sum-rate sweeps, the data behind the usual comparison plots.
#
# Writes ser.csv and sumrate.csv in the current directory; plot them with
# whatever you like (the first line of each file records the config).

from latinia import sim
from latinia.select import Strategy
from latinia.sim import SimConfig

cfg = SimConfig(K=3, seed=1, trials=50, symbols=500, snr_start=0, snr_stop=30,
                snr_step=5, schemes='all',
                strategies=(Strategy('optimal'), Strategy('cn', 13),
                            Strategy('ocn', 13), Strategy('random', 13)))
points = sim.run_ser(cfg)
sim.write_csv('ser.csv', sim.SER_HEADER, points, cfg)
for p in points:
    if p.snr_db in (10, 20):
        print(f"{p.snr_db:4.0f} dB {p.strategy:>9}: SER {p.ser:.2e}")

rate_cfg = SimConfig(K=3, seed=1, trials=50, objective='sumrate', snr_start=0,
                     snr_stop=30, snr_step=10,
                     strategies=(Strategy('optimal'), Strategy('cn', 1),
                                 Strategy('random', 1)))
rates = sim.run_sumrate(rate_cfg)
sim.write_csv('sumrate.csv', sim.SUMRATE_HEADER, rates, rate_cfg)
for p in rates:
    print(f"{p.snr_db:4.0f} dB {p.strategy:>9}: {p.mean_sum_rate:6.2f} bit/s/Hz")
