//! Acceptance gate. Each test checks one criterion and prints a
//! `[PASS]` / `[FAIL]` line per check; run with `--nocapture` to see them.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use symnet::lattice::{is_admissible, node_count, unlabel, NodeAddress, TopologySpec};
use symnet::metrics::{
    density, density_ratio, diameter, matched_density_ratio, path_length_histogram, path_length_histogram_sampled,
    DEFAULT_PAIR_BUDGET,
};
use symnet::oracle::{verify_degree_bounds, verify_distances, DEFAULT_VERIFY_NODES};
use symnet::topology::{Topology, DEFAULT_EDGE_BUDGET};

struct Gate {
    criterion: u32,
    failures: Vec<String>,
}

impl Gate {
    fn new(criterion: u32) -> Self {
        Gate {
            criterion,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {}", self.criterion, what.as_ref());
        if !ok {
            self.failures.push(what.as_ref().to_string());
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:#?}",
            self.criterion,
            self.failures
        );
    }
}

fn sp(m: u32, n: u32) -> TopologySpec {
    TopologySpec::symplectic(m, n).unwrap()
}

fn hc(n: u32) -> TopologySpec {
    TopologySpec::hypercube(n).unwrap()
}

fn mesh(mu: u32, n: u32) -> TopologySpec {
    TopologySpec::mesh(mu, n).unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Mean Hamming distance over unordered distinct pairs of the n-cube.
fn hypercube_exact_mean(n: u32) -> f64 {
    let nodes = 2f64.powi(n as i32);
    n as f64 * nodes / 2.0 / (nodes - 1.0)
}

#[test]
fn criterion_1_node_counts() {
    let mut g = Gate::new(1);
    let start = Instant::now();
    let cases = [
        (sp(2, 5), 1563),
        (sp(2, 6), 7813),
        (sp(2, 10), 4_882_813),
        (sp(1, 8), 3281),
        (sp(1, 9), 9842),
        (sp(5, 3), 666),
        (sp(5, 4), 7321),
        (sp(4, 2), 41),
        (sp(3, 3), 172),
        (sp(2, 4), 313),
    ];
    for (spec, expected) in cases {
        let got = node_count(&spec);
        g.check(got == expected, format!("{spec} has {got} nodes (expected {expected})"));
    }
    let elapsed = start.elapsed();
    g.check(elapsed < Duration::from_secs(1), format!("runtime {elapsed:?} < 1 s"));
    g.finish();
}

#[test]
fn criterion_2_diameters() {
    let mut g = Gate::new(2);
    let mut all = true;
    for m in 1..=8 {
        for n in 1..=12 {
            all &= diameter(&sp(m, n)) == (m * n) as u64;
        }
    }
    g.check(all, "symplectic diameter = M n for M <= 8, n <= 12");

    let pairings = [
        (hc(10), sp(2, 5), 10),
        (hc(12), sp(2, 6), 12),
        (hc(20), sp(2, 10), 20),
        (hc(8), sp(1, 8), 8),
        (hc(9), sp(1, 9), 9),
        (mesh(6, 4), sp(5, 4), 20),
        (mesh(6, 3), sp(5, 3), 15),
    ];
    for (a, b, l) in pairings {
        let (da, db) = (diameter(&a), diameter(&b));
        g.check(da == l && db == l, format!("{a} L={da}, {b} L={db} (expected {l})"));
    }

    // the farthest histogram bin is populated exactly at the diameter
    for spec in [sp(2, 5), sp(5, 3), hc(10), mesh(6, 3)] {
        let h = path_length_histogram(&spec, DEFAULT_PAIR_BUDGET).unwrap();
        g.check(
            h.max_observed() == diameter(&spec),
            format!("{spec} largest observed distance {} = L", h.max_observed()),
        );
    }
    g.finish();
}

fn certification_matrix() -> Vec<TopologySpec> {
    let mut specs: Vec<_> = (1..=10).map(hc).collect();
    for mu in 2..=5 {
        for n in 1..=4 {
            specs.push(mesh(mu, n));
        }
    }
    for m in 1..=3 {
        for n in 2..=4 {
            let s = sp(m, n);
            if node_count(&s) <= 2000 {
                specs.push(s);
            }
        }
    }
    specs
}

#[test]
fn criterion_3_oracle_certification() {
    let mut g = Gate::new(3);
    let start = Instant::now();
    let mut pairs = 0u64;
    for spec in certification_matrix() {
        let report = verify_distances(&spec, DEFAULT_VERIFY_NODES).unwrap();
        pairs += report.pairs_checked;
        g.check(
            report.mismatches.is_empty(),
            format!(
                "{spec}: {} mismatches over {} pairs",
                report.mismatches.len(),
                report.pairs_checked
            ),
        );
    }
    let elapsed = start.elapsed();
    g.check(
        elapsed < Duration::from_secs(60),
        format!("full matrix ({pairs} pairs) in {elapsed:?} < 60 s"),
    );
    g.finish();
}

#[test]
fn criterion_4_degree_bounds() {
    let mut g = Gate::new(4);
    let mut specs = vec![];
    for m in 1..=3 {
        for n in 2..=4 {
            specs.push(sp(m, n));
        }
    }
    specs.extend([sp(4, 2), sp(2, 5), sp(1, 5), sp(1, 6)]);
    for spec in specs {
        let r = verify_degree_bounds(&spec, DEFAULT_EDGE_BUDGET).unwrap();
        let n = spec.n() as u64;
        let (table_min, table_max) = (n * (n + 1) / 2, 2 * n * n);
        g.check(
            r.min_degree_seen == table_min,
            format!("{spec}: min degree {} = n(n+1)/2 = {table_min}", r.min_degree_seen),
        );
        if spec.highest_weight() == Some(1) {
            g.check(
                r.max_degree_seen < table_max
                    && r.max_degree_seen == Topology::new(spec).degree_bounds().1,
                format!(
                    "{spec}: M=1 attained max degree {} < 2n^2 = {table_max}",
                    r.max_degree_seen
                ),
            );
        } else {
            g.check(
                r.max_degree_seen == table_max,
                format!("{spec}: max degree {} = 2n^2 = {table_max}", r.max_degree_seen),
            );
        }
    }
    g.finish();
}

#[test]
fn criterion_5_density_formulas() {
    let mut g = Gate::new(5);
    let tol = 1e-12;
    let (mut worst_h, mut worst_m, mut worst_s) = (0f64, 0f64, 0f64);
    for n in 2..=10 {
        let nf = n as f64;
        let ni = n as i32;
        worst_h = worst_h.max(rel_err(density(&hc(n)), (2.0 / nf).powi(ni)));
        for mu in 2..=9 {
            let muf = mu as f64;
            let expect = (muf / ((muf - 1.0) * nf)).powi(ni);
            worst_m = worst_m.max(rel_err(density(&mesh(mu, n)), expect));
        }
        for m in 1..=5 {
            let mf = m as f64;
            let expect = 0.5 * ((2.0 * mf + 1.0).powi(ni) + 1.0) / (mf * nf).powi(ni);
            worst_s = worst_s.max(rel_err(density(&sp(m, n)), expect));
        }
    }
    g.check(worst_h < tol, format!("hypercube (2/n)^n, max rel err {worst_h:.2e}"));
    g.check(worst_m < tol, format!("mesh (mu/((mu-1)n))^n, max rel err {worst_m:.2e}"));
    g.check(worst_s < tol, format!("symplectic ((2M+1)^n+1)/(2(Mn)^n), max rel err {worst_s:.2e}"));

    let (mut r_hm, mut r_sh, mut r_sh1, mut r_sm) = (0f64, 0f64, 0f64, 0f64);
    let mut worst_sm_case = String::new();
    for n in 2..=10u32 {
        let ni = n as i32;
        for mu in 2..=9u32 {
            let muf = mu as f64;
            let printed = (2.0 * (1.0 - 1.0 / muf)).powi(ni);
            r_hm = r_hm.max(rel_err(density_ratio(&hc(n), &mesh(mu, n)), printed));

            // equal dimension and diameter: M = mu - 1
            let printed = 2f64.powi(ni - 1) * ((1.0 - 1.0 / (2.0 * muf)).powi(ni) + 1.0);
            let direct = density_ratio(&sp(mu - 1, n), &mesh(mu, n));
            let e = rel_err(direct, printed);
            if e > r_sm {
                r_sm = e;
                worst_sm_case = format!("mu={mu}, n={n}: direct {direct:.6} vs printed {printed:.6}");
            }
        }
        for m in 1..=5u32 {
            let mf = m as f64;
            let printed = 0.5 * ((2.0 * mf + 1.0).powi(ni) + 1.0) / (2.0 * mf).powi(ni);
            r_sh = r_sh.max(rel_err(density_ratio(&sp(m, n), &hc(n)), printed));
        }
        let printed = (3f64.powi(ni) + 1.0) / 2f64.powi(ni + 1);
        r_sh1 = r_sh1.max(rel_err(density_ratio(&sp(1, n), &hc(n)), printed));
    }
    g.check(r_hm < tol, format!("rho_h/rho_m = [2(1-1/mu)]^n, max rel err {r_hm:.2e}"));
    g.check(r_sh < tol, format!("rho_s/rho_h = ((2M+1)^n+1)/(2(2M)^n), max rel err {r_sh:.2e}"));
    g.check(r_sh1 < tol, format!("rho_s/rho_h at M=1 = (3^n+1)/2^(n+1), max rel err {r_sh1:.2e}"));
    let mut r_sm_corrected = 0f64;
    for n in 2..=10u32 {
        for mu in 2..=9u32 {
            let (s, m) = (sp(mu - 1, n), mesh(mu, n));
            let closed = matched_density_ratio(&s, &m).unwrap();
            r_sm_corrected = r_sm_corrected.max(rel_err(density_ratio(&s, &m), closed));
        }
    }
    g.check(
        r_sm_corrected < tol,
        format!(
            "rho_s/rho_m = 2^(n-1)[(1-1/(2mu))^n + (2mu)^-n] with M = mu-1, from the densities, max rel err {r_sm_corrected:.2e}"
        ),
    );
    for (mu, n) in [(6u32, 3u32), (6, 4)] {
        let direct = density_ratio(&sp(mu - 1, n), &mesh(mu, n));
        println!("    rho_s/rho_m at mu={mu}, n={n}: from densities {direct:.12}");
    }
    g.check(
        r_sm < tol,
        format!(
            "rho_s/rho_m = 2^(n-1)[(1-1/(2mu))^n + 1] with M = mu-1, max rel err {r_sm:.2e} ({worst_sm_case})"
        ),
    );
    g.finish();
}

#[test]
fn criterion_6_fig6_exact_histograms() {
    let mut g = Gate::new(6);
    let (h, s) = (hc(10), sp(2, 5));
    let hh = path_length_histogram(&h, DEFAULT_PAIR_BUDGET).unwrap();
    let hs = path_length_histogram(&s, DEFAULT_PAIR_BUDGET).unwrap();
    g.check(
        diameter(&h) == 10 && diameter(&s) == 10,
        "hypercube:n=10 and symplectic:M=2,n=5 share diameter 10",
    );
    g.check(
        hs.mean < hh.mean,
        format!("symplectic mean {:.6} < hypercube mean {:.6}", hs.mean, hh.mean),
    );
    for (spec, hist) in [(h, &hh), (s, &hs)] {
        let nu = node_count(&spec);
        let sum: u64 = hist.iter().map(|(_, c)| c).sum();
        g.check(
            sum == nu * (nu - 1) / 2 && hist.total_pairs == sum,
            format!("{spec}: histogram total {sum} = nu(nu-1)/2"),
        );
    }
    g.finish();
}

#[test]
fn criterion_7_fig7_sampled() {
    let mut g = Gate::new(7);
    let start = Instant::now();
    let samples = 1_000_000;

    let h = path_length_histogram_sampled(&hc(20), samples, 42).unwrap();
    let exact = hypercube_exact_mean(20);
    let se = h.std_error();
    g.check(
        (h.mean - exact).abs() < 3.0 * se,
        format!(
            "hypercube:n=20 sampled mean {:.5} vs exact {exact:.7} (3 SE = {:.5})",
            h.mean,
            3.0 * se
        ),
    );
    g.check(
        (h.mean - 11.0).abs() > 0.5 && (h.mean - 12.0).abs() > 0.5,
        format!("hypercube:n=20 mean {:.3} is not the published 11 or 12", h.mean),
    );

    let s = path_length_histogram_sampled(&sp(2, 10), samples, 42).unwrap();
    g.check(
        (s.mean - 8.0).abs() <= 0.1,
        format!("symplectic:M=2,n=10 sampled mean {:.5} = 8.0 +- 0.1", s.mean),
    );
    let elapsed = start.elapsed();
    g.check(elapsed < Duration::from_secs(30), format!("runtime {elapsed:?} < 30 s"));
    g.finish();
}

#[test]
fn criterion_8_parity_and_census() {
    let mut g = Gate::new(8);
    let mut specs = vec![];
    for m in 1..=3 {
        for n in 2..=4 {
            specs.push(sp(m, n));
        }
    }
    specs.extend([sp(4, 2), sp(2, 5), sp(5, 3)]);
    for spec in specs {
        let topo = Topology::new(spec);
        let mut odd_labels = 0;
        let mut odd_differences = 0;
        for p in 0..topo.node_count() {
            let k = spec.kappa_at(p);
            odd_labels += (k % 2) as usize;
            for nb in topo.neighbors(k).unwrap() {
                odd_differences += ((k as i64 - nb as i64) % 2 != 0) as usize;
                odd_labels += (nb % 2) as usize;
            }
        }
        // census over the whole enclosing lattice
        let mut admissible = 0u64;
        let mut coords = vec![0u32; spec.n() as usize];
        for kappa in 0..spec.lattice_size() {
            let mut rest = kappa;
            for c in coords.iter_mut() {
                *c = (rest % spec.mu() as u64) as u32;
                rest /= spec.mu() as u64;
            }
            let address = NodeAddress::new(coords.clone());
            if is_admissible(&address, &spec) {
                admissible += 1;
                odd_labels += (kappa % 2) as usize;
                assert_eq!(unlabel(kappa, &spec).unwrap(), address);
            }
        }
        let m = spec.highest_weight().unwrap() as u64;
        let expect = (2 * m + 1).pow(spec.n()).div_ceil(2);
        g.check(
            odd_labels == 0 && odd_differences == 0 && admissible == expect,
            format!(
                "{spec}: {odd_labels} odd labels, {odd_differences} odd neighbor differences, census {admissible} = {expect}"
            ),
        );
    }
    g.finish();
}

fn run_histogram(bin: &Path, dir: &Path, threads: u32) -> Vec<u8> {
    let out = dir.join(format!("t{threads}.csv"));
    let status = Command::new(bin)
        .args(["--threads", &threads.to_string(), "histogram", "symplectic:M=2,n=10"])
        .args(["--sample", "100000", "--seed", "7", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    std::fs::read(out).unwrap()
}

#[test]
fn criterion_9_determinism() {
    let mut g = Gate::new(9);
    let bin = Path::new(env!("CARGO_BIN_EXE_symnet"));
    let dir = tempfile::tempdir().unwrap();
    let one = run_histogram(bin, dir.path(), 1);
    let again = run_histogram(bin, dir.path(), 1);
    g.check(one == again, "repeated single-thread runs are byte-identical");
    for threads in [2, 8] {
        let other = run_histogram(bin, dir.path(), threads);
        g.check(one == other, format!("{threads} threads byte-identical to 1 thread"));
    }
    let text = String::from_utf8(one).unwrap();
    g.check(
        text.contains("# seed=7\n") && text.contains("# sample_size=100000\n"),
        "CSV metadata records seed and sample size",
    );
    g.finish();
}
