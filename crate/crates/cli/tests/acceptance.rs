//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use kanto::monad::{
    barycenter, check_algebra, check_monad_laws, lifted_pseudometric, reweight_series_check, second_order_distance,
    unit, unit2, ConvexSpace,
};
use kanto::space::pullback;
use kanto::transport::{
    brute_force_distance, distance, kantorovich_by, mass_transport_bound_check, partition_coupling, MassTransport,
    Solver,
};
use kanto::{kantorovich, FiniteMeasure, GroundSpace, Measure, Metric, Point, PointMap, SecondOrderMeasure, ThirdOrderMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Cell = Box<dyn Fn(&Point) -> bool>;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + tag)
}

fn pt(c: &[f64]) -> Point {
    Point::coords(c)
}

fn square(r: &mut ChaCha8Rng) -> Point {
    pt(&[r.random(), r.random()])
}

fn rational_weights(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let k: Vec<u32> = (0..n).map(|_| r.random_range(1..=12)).collect();
    let s: u32 = k.iter().sum();
    k.iter().map(|&k| k as f64 / s as f64).collect()
}

fn measure_of<T: kanto::Atom>(r: &mut ChaCha8Rng, atoms: Vec<T>) -> FiniteMeasure<T> {
    let w = rational_weights(r, atoms.len());
    FiniteMeasure::new(atoms.into_iter().zip(w).collect()).unwrap()
}

fn random_measure(r: &mut ChaCha8Rng, max: usize, mut atom: impl FnMut(&mut ChaCha8Rng) -> Point) -> Measure {
    let n = r.random_range(1..=max);
    let atoms = (0..n).map(|_| atom(r)).collect();
    measure_of(r, atoms)
}

fn euclid(a: &Point, b: &Point) -> f64 {
    let (x, y) = (a.as_coords().unwrap(), b.as_coords().unwrap());
    x.iter().zip(y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt()
}

fn fail_if(bad: usize, total: usize, worst: f64, what: &str) -> Outcome {
    let line = format!("{total} {what}, worst deviation {worst:.3e}");
    if bad == 0 {
        Ok(line)
    } else {
        Err(format!("{bad} of {line}"))
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let space = GroundSpace::of_metric(Metric::euclidean());
    let mut r = rng(1);
    let (mut bad, mut worst) = (0, 0.0f64);
    for _ in 0..500 {
        let n = r.random_range(1..=7);
        let mu = Measure::uniform((0..n).map(|_| square(&mut r))).unwrap();
        let eta = Measure::uniform((0..n).map(|_| square(&mut r))).unwrap();
        let fast = kantorovich(&space, &mu, &eta).map_err(|e| e.to_string())?;
        let slow = brute_force_distance(&space, &mu, &eta).map_err(|e| e.to_string())?;
        if slow.solver != Solver::BrutePermutation && mu.len() == n && eta.len() == n {
            return Err(format!("permutation oracle not used for a uniform {n}x{n} instance"));
        }
        let dev = (fast.cost - slow.cost).abs();
        worst = worst.max(dev);
        bad += usize::from(dev > 1e-9);
    }
    for _ in 0..200 {
        let mu = random_measure(&mut r, 4, square);
        let eta = random_measure(&mut r, 4, square);
        let fast = kantorovich(&space, &mu, &eta).map_err(|e| e.to_string())?;
        let slow = brute_force_distance(&space, &mu, &eta).map_err(|e| e.to_string())?;
        let dev = (fast.cost - slow.cost).abs();
        worst = worst.max(dev);
        bad += usize::from(dev > 1e-9);
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Err(format!("took {secs:.1} s"));
    }
    fail_if(bad, 700, worst, &format!("instances in {secs:.2} s"))
}

fn metric_axioms() -> Outcome {
    let mut r = rng(2);
    let (mut bad, mut worst) = (0, 0.0f64);
    for (metric, grid) in [(Metric::euclidean(), false), (Metric::manhattan(), false), (Metric::discrete(), true)] {
        let space = GroundSpace::of_metric(metric);
        let draw = |r: &mut ChaCha8Rng| {
            random_measure(r, 5, |r| {
                if grid {
                    pt(&[r.random_range(0..3) as f64, r.random_range(0..3) as f64])
                } else {
                    square(r)
                }
            })
        };
        for _ in 0..300 {
            let (a, b, c) = (draw(&mut r), draw(&mut r), draw(&mut r));
            let d = |x: &Measure, y: &Measure| distance(&space, x, y).unwrap();
            let sym = (d(&a, &b) - d(&b, &a)).abs();
            let tri = (d(&a, &c) - d(&a, &b) - d(&b, &c)).max(0.0);
            let dev = sym.max(tri);
            worst = worst.max(dev);
            bad += usize::from(dev > 1e-8);
        }
    }
    fail_if(bad, 900, worst, "triples")
}

fn dirac_and_diameter() -> Outcome {
    let mut r = rng(3);
    let points: Vec<Point> = (0..20).map(|_| square(&mut r)).collect();
    let space = GroundSpace::new(points.clone(), Metric::euclidean()).map_err(|e| e.to_string())?;
    let mut iso = 0.0f64;
    let mut diam = (0.0f64, 0, 0);
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            let lifted = distance(&space, &unit(x.clone()), &unit(y.clone())).unwrap();
            iso = iso.max((lifted - euclid(x, y)).abs());
            if euclid(x, y) > diam.0 {
                diam = (euclid(x, y), i, j);
            }
        }
    }
    if iso > 1e-12 {
        return Err(format!("Dirac isometry off by {iso:.3e}"));
    }
    let mut sampled = 0.0f64;
    for _ in 0..200 {
        let pick = |r: &mut ChaCha8Rng| random_measure(r, 8, |r| points[r.random_range(0..20)].clone());
        let (a, b) = (pick(&mut r), pick(&mut r));
        sampled = sampled.max(distance(&space, &a, &b).unwrap());
    }
    if sampled > diam.0 + 1e-12 {
        return Err(format!("sampled distance {sampled} exceeds diameter {}", diam.0));
    }
    let at = distance(&space, &unit(points[diam.1].clone()), &unit(points[diam.2].clone())).unwrap();
    if (at - diam.0).abs() > 1e-12 {
        return Err(format!("diameter pair gives {at}, diameter is {}", diam.0));
    }
    Ok(format!("isometry within {iso:.1e}, max sampled {sampled:.4} <= diameter {:.4}, attained", diam.0))
}

/// Weight of each point after flattening twice, computed by summing path
/// products directly.
fn path_weights(big: &ThirdOrderMeasure) -> Vec<(f64, f64)> {
    let mut acc: Vec<(f64, f64)> = Vec::new();
    for (m, a) in big.iter() {
        for (mu, b) in m.iter() {
            for (x, c) in mu.iter() {
                let x = x.x().unwrap();
                match acc.iter_mut().find(|(p, _)| *p == x) {
                    Some(e) => e.1 += a * b * c,
                    None => acc.push((x, a * b * c)),
                }
            }
        }
    }
    acc
}

fn monad_laws() -> Outcome {
    let mut r = rng(4);
    let samples: Vec<ThirdOrderMeasure> = (0..200)
        .map(|_| {
            let outer = r.random_range(1..=3);
            let atoms = (0..outer)
                .map(|_| {
                    let mid = r.random_range(1..=3);
                    let atoms = (0..mid).map(|_| random_measure(&mut r, 4, |r| Point::from(r.random_range(0..6) as f64))).collect();
                    measure_of(&mut r, atoms)
                })
                .collect();
            measure_of(&mut r, atoms)
        })
        .collect();
    for s in &samples {
        let flat = s.flatten().flatten();
        for (x, w) in path_weights(s) {
            let got = flat.weight_of(&Point::from(x));
            if (got - w).abs() > 1e-9 {
                return Err(format!("flatten gives weight {got} at {x}, path sum is {w}"));
            }
        }
    }
    let reports = check_monad_laws(&samples, 1e-9);
    let worst = reports.iter().map(|l| l.max_deviation).fold(0.0, f64::max);
    match reports.iter().find(|l| !l.pass) {
        Some(l) => Err(format!("{} failed with deviation {:.3e}", l.law, l.max_deviation)),
        None => Ok(format!("{} laws on 200 instances, worst deviation {worst:.3e}", reports.len())),
    }
}

fn algebra_laws() -> Outcome {
    let mut r = rng(5);
    let r3 = ConvexSpace::euclidean(3);
    let samples: Vec<SecondOrderMeasure> = (0..100)
        .map(|_| {
            let outer = r.random_range(1..=4);
            let atoms = (0..outer)
                .map(|_| random_measure(&mut r, 4, |r| pt(&[r.random_range(-2.0..2.0), r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)])))
                .collect();
            measure_of(&mut r, atoms)
        })
        .collect();
    // independent barycenter of the flattened measure
    for m in &samples {
        let mut b = [0.0; 3];
        for (mu, t) in m.iter() {
            for (x, w) in mu.iter() {
                for (acc, c) in b.iter_mut().zip(x.as_coords().unwrap()) {
                    *acc += t * w * c;
                }
            }
        }
        let lib = barycenter(&r3, &m.flatten()).map_err(|e| e.to_string())?;
        let dev = lib.as_coords().unwrap().iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        if dev > 1e-9 {
            return Err(format!("barycenter of flatten off by {dev:.3e}"));
        }
    }
    // f(x) = A x + c from R^3 to R^2
    let a = [[1.5, -0.5, 2.0], [0.25, 1.0, -1.0]];
    let c = [0.5, -3.0];
    let f = PointMap::custom(move |p| {
        let x = p.as_coords().unwrap();
        Ok(pt(&[
            a[0].iter().zip(x).map(|(a, x)| a * x).sum::<f64>() + c[0],
            a[1].iter().zip(x).map(|(a, x)| a * x).sum::<f64>() + c[1],
        ]))
    });
    let reports = check_algebra(&r3, &samples, Some((&f, &ConvexSpace::euclidean(2))), 1e-9).map_err(|e| e.to_string())?;
    let worst = reports.iter().map(|l| l.max_deviation).fold(0.0, f64::max);
    match reports.iter().find(|l| !l.pass) {
        Some(l) => Err(format!("{} failed with deviation {:.3e}", l.law, l.max_deviation)),
        None => Ok(format!("{} laws on 100 instances, worst deviation {worst:.3e}", reports.len())),
    }
}

fn flatten_and_dirac() -> Outcome {
    let mut r = rng(6);
    let line = GroundSpace::of_metric(Metric::euclidean());
    let draw = |r: &mut ChaCha8Rng| -> SecondOrderMeasure {
        let outer = r.random_range(1..=3);
        let atoms = (0..outer).map(|_| random_measure(r, 5, |r| Point::from(r.random_range(-3.0..3.0)))).collect();
        measure_of(r, atoms)
    };
    let (mut psi_worst, mut dirac_worst) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (m, n) = (draw(&mut r), draw(&mut r));
        let dd = second_order_distance(&line, &m, &n).map_err(|e| e.to_string())?.cost;
        let flat = distance(&line, &m.flatten(), &n.flatten()).unwrap();
        psi_worst = psi_worst.max(flat - dd);

        // from a Dirac only one coupling exists, so both sides have a
        // closed form: sum_i t_i sum_j w_ij |x - y_ij|
        let x: f64 = r.random_range(-3.0..3.0);
        let closed: f64 = m
            .iter()
            .map(|(mu, t)| t * mu.iter().map(|(y, w)| w * (x - y.x().unwrap()).abs()).sum::<f64>())
            .sum();
        let lhs = second_order_distance(&line, &unit2(unit(x.into())), &m).unwrap().cost;
        let rhs = distance(&line, &unit(x.into()), &m.flatten()).unwrap();
        dirac_worst = dirac_worst.max((lhs - rhs).abs()).max((lhs - closed).abs());
    }
    if psi_worst > 1e-9 || dirac_worst > 1e-8 {
        return Err(format!("flatten excess {psi_worst:.3e}, Dirac gap {dirac_worst:.3e}"));
    }
    Ok(format!("200 pairs, flatten excess {:.3e}, Dirac gap {dirac_worst:.3e}", psi_worst.max(0.0)))
}

fn sup_distance() -> Outcome {
    let mut r = rng(7);
    let space = GroundSpace::of_metric(Metric::euclidean());
    let (mut worst_excess, mut worst_attain) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let domain: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let f: Vec<Point> = (0..10).map(|_| square(&mut r)).collect();
        let g: Vec<Point> = (0..10).map(|_| square(&mut r)).collect();
        let sup = (0..10).map(|i| euclid(&f[i], &g[i])).fold(0.0, f64::max);
        let push = |mu: &Measure, img: &[Point]| mu.map(|x| img[x.x().unwrap() as usize].clone());
        let mut best = 0.0f64;
        for _ in 0..100 {
            let mu = random_measure(&mut r, 10, |r| Point::from(domain[r.random_range(0..10)]));
            let d = distance(&space, &push(&mu, &f), &push(&mu, &g)).unwrap();
            best = best.max(d);
        }
        worst_excess = worst_excess.max(best - sup);
        let dirac_best = (0..10)
            .map(|i| {
                let mu = unit(Point::from(i as f64));
                distance(&space, &push(&mu, &f), &push(&mu, &g)).unwrap()
            })
            .fold(0.0, f64::max);
        worst_attain = worst_attain.max((dirac_best - sup).abs());
    }
    if worst_excess > 1e-9 || worst_attain > 1e-9 {
        return Err(format!("excess {worst_excess:.3e}, Dirac attainment gap {worst_attain:.3e}"));
    }
    Ok(format!("50 map pairs x 100 measures, Dirac attainment gap {worst_attain:.3e}"))
}

fn convexity() -> Outcome {
    let mut r = rng(8);
    let r2 = ConvexSpace::euclidean(2);
    let (mut convex, mut bary) = (0.0f64, 0.0f64);
    for metric in [Metric::euclidean(), Metric::manhattan()] {
        let space = GroundSpace::of_metric(metric);
        for _ in 0..300 {
            let mut draw = || random_measure(&mut r, 4, |r| pt(&[r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]));
            let (mu, mu2, nu, nu2) = (draw(), draw(), draw(), draw());
            let d = |a: &Measure, b: &Measure| distance(&space, a, b).unwrap();
            let (dm, dn) = (d(&mu, &mu2), d(&nu, &nu2));
            for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let lhs = d(&mu.mix2(&nu, t).unwrap(), &mu2.mix2(&nu2, t).unwrap());
                convex = convex.max(lhs - t * dm - (1.0 - t) * dn);
            }
            let (b1, b2) = (barycenter(&r2, &mu).unwrap(), barycenter(&r2, &mu2).unwrap());
            bary = bary.max(space.distance(&b1, &b2).unwrap() - dm);
        }
    }
    if convex > 1e-9 || bary > 1e-9 {
        return Err(format!("convexity excess {convex:.3e}, barycenter excess {bary:.3e}"));
    }
    Ok(format!(
        "600 quadruples x 5 weights, excesses {:.3e} / {:.3e}",
        convex.max(0.0),
        bary.max(0.0)
    ))
}

fn mass_transport() -> Outcome {
    let mut r = rng(9);
    let space = GroundSpace::of_metric(Metric::euclidean());
    let (mut checked, mut tries) = (0, 0);
    while checked < 500 {
        tries += 1;
        if tries > 50_000 {
            return Err(format!("only {checked} applicable instances generated"));
        }
        let eps: f64 = r.random_range(0.05..1.0);
        let delta: f64 = r.random_range(0.05..1.0);
        let mu = random_measure(&mut r, 6, square);
        // K holds the heaviest atoms until they carry 1 - eps/2
        let mut order: Vec<(Point, f64)> = mu.iter().map(|(x, w)| (x.clone(), w)).collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut k = Vec::new();
        let mut mass = 0.0;
        for (x, w) in order {
            if mass >= 1.0 - eps / 2.0 {
                break;
            }
            k.push(x);
            mass += w;
        }
        // shift every atom by at most eps * delta / 2 in a random direction,
        // which bounds the transport cost by the same amount
        let shifted: Vec<(Point, f64)> = mu
            .iter()
            .map(|(x, w)| {
                let c = x.as_coords().unwrap();
                let len = r.random_range(0.0..=1.0) * eps * delta / 2.0;
                let ang = r.random_range(0.0..std::f64::consts::TAU);
                (pt(&[c[0] + len * ang.cos(), c[1] + len * ang.sin()]), w)
            })
            .collect();
        let eta = Measure::new(shifted).unwrap();
        let in_k = |p: &Point| k.iter().any(|q| q.same_as(p));
        match mass_transport_bound_check(&space, &mu, &eta, in_k, eps, delta).map_err(|e| e.to_string())? {
            MassTransport::Checked { holds: true, .. } => checked += 1,
            MassTransport::Checked { neighbourhood_mass, .. } => {
                return Err(format!("bound failed: neighbourhood mass {neighbourhood_mass} < {}", 1.0 - eps));
            }
            MassTransport::NotApplicable => {}
        }
    }
    Ok(format!("500 applicable instances ({tries} drawn)"))
}

fn lifting() -> Outcome {
    let mut r = rng(10);
    let r3 = GroundSpace::of_metric(Metric::euclidean());
    let grid3 = |r: &mut ChaCha8Rng| pt(&[r.random_range(0..3) as f64, r.random_range(0..3) as f64, r.random_range(0..3) as f64]);
    let mut direct = 0.0f64;
    for i in 0..200 {
        let p = match i % 3 {
            0 => Metric::coordinate(0),
            1 => pullback(PointMap::Project(vec![1, 2]), Metric::manhattan()),
            _ => Metric::coordinate(2).with_cap(1.5).unwrap(),
        };
        let mu = random_measure(&mut r, 5, grid3);
        let eta = random_measure(&mut r, 5, grid3);
        let lifted = lifted_pseudometric(&r3, &p, &mu, &eta).map_err(|e| e.to_string())?;
        let by_cost = kantorovich_by(&mu, &eta, |x, y| p.distance(x, y)).unwrap().cost;
        direct = direct.max((lifted - by_cost).abs());
    }
    let mut commute = 0.0f64;
    for _ in 0..200 {
        let f = PointMap::Project(vec![r.random_range(0..3), r.random_range(0..3)]);
        let inner = if r.random() { Metric::coordinate(0) } else { Metric::coordinate(1) };
        let rho = pullback(f.clone(), inner.clone());
        let mu = random_measure(&mut r, 5, grid3);
        let eta = random_measure(&mut r, 5, grid3);
        let lhs = lifted_pseudometric(&r3, &rho, &mu, &eta).map_err(|e| e.to_string())?;
        let (fm, fe) = (mu.try_map(|x| f.apply(x)).unwrap(), eta.try_map(|x| f.apply(x)).unwrap());
        let rhs = lifted_pseudometric(&GroundSpace::of_metric(inner.clone()), &inner, &fm, &fe).map_err(|e| e.to_string())?;
        commute = commute.max((lhs - rhs).abs());
    }
    let mut rew_bad = 0;
    for _ in 0..100 {
        let k = r.random_range(1..=6);
        let xs: Vec<Vec<f64>> = (0..k).map(|_| (0..3).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
        let lambda = rational_weights(&mut r, k);
        let m = r.random_range(0..k);
        let rest = 1.0 - lambda[m];
        let eps: Vec<f64> = (0..k).map(|n| if n == m { 1.0 } else { r.random_range(rest.max(1e-3)..=1.0) }).collect();
        rew_bad += usize::from(!reweight_series_check(&xs, &lambda, m, &eps).map_err(|e| e.to_string())?);
    }
    if direct > 1e-9 || commute > 1e-9 || rew_bad > 0 {
        return Err(format!("direct {direct:.3e}, pullback {commute:.3e}, {rew_bad} reweight failures"));
    }
    Ok(format!("200 + 200 instances within {:.3e}, 100 reweightings", direct.max(commute)))
}

fn partitions() -> Outcome {
    let mut r = rng(11);
    let line = GroundSpace::of_metric(Metric::euclidean());
    let (mut marg, mut diag, mut below) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let mu0 = random_measure(&mut r, 6, |r| Point::from(r.random_range(0..20) as f64 / 2.0));
        let mu = random_measure(&mut r, 6, |r| Point::from(r.random_range(0..20) as f64 / 2.0));
        let k = r.random_range(2..=4);
        let mut cuts: Vec<f64> = (0..=k).map(|_| r.random_range(0.0..10.0)).collect();
        cuts.sort_by(f64::total_cmp);
        let cell = |x: &Point| -> usize {
            let v = x.x().unwrap();
            (0..k).find(|&i| cuts[i] <= v && v < cuts[i + 1]).map_or(0, |i| i + 1)
        };
        let preds: Vec<Cell> = (0..k)
            .map(|i| {
                let (lo, hi) = (cuts[i], cuts[i + 1]);
                Box::new(move |x: &Point| (lo..hi).contains(&x.x().unwrap())) as Cell
            })
            .collect();
        let cells: Vec<&dyn Fn(&Point) -> bool> = preds.iter().map(|p| p.as_ref()).collect();
        let c = partition_coupling(&mu0, &mu, &cells).map_err(|e| e.to_string())?;
        marg = marg.max(c.marginal_error(&mu0, &mu));
        if c.gamma().iter().flatten().any(|&g| g < 0.0) {
            return Err("negative coupling entry".into());
        }
        for i in 0..=k {
            let on = c.mass_where(|x, y| cell(x) == i && cell(y) == i);
            let want = mu0.mass_where(|x| cell(x) == i).min(mu.mass_where(|x| cell(x) == i));
            diag = diag.max((on - want).abs());
        }
        let opt = kantorovich(&line, &mu0, &mu).unwrap().cost;
        below = below.max(opt - c.cost_in(&line).unwrap());
    }
    if marg > 1e-9 || diag > 1e-9 || below > 1e-9 {
        return Err(format!("marginals {marg:.3e}, diagonal {diag:.3e}, optimum excess {below:.3e}"));
    }
    Ok(format!("200 partitions, marginals {marg:.3e}, diagonal blocks {diag:.3e}"))
}

fn cli_goldens() -> Outcome {
    let mut differing = Vec::new();
    for (name, args) in common::GOLDEN {
        let (a, b) = (common::kanto(args), common::kanto(args));
        if !a.status.success() {
            return Err(format!("{name} failed: {}", String::from_utf8_lossy(&a.stderr)));
        }
        let golden = std::fs::read(common::golden_path(name)).unwrap_or_default();
        if a.stdout != b.stdout || a.stdout != golden {
            differing.push(*name);
        }
    }
    if differing.is_empty() {
        Ok(format!("{} commands byte-identical across runs and to goldens", common::GOLDEN.len()))
    } else {
        Err(format!("output differs for {}", differing.join(", ")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", oracle_equivalence),
        ("metric axioms of the lifted distance", metric_axioms),
        ("Dirac isometry and diameter", dirac_and_diameter),
        ("monad laws", monad_laws),
        ("algebra laws", algebra_laws),
        ("flatten non-expansion and Dirac equality", flatten_and_dirac),
        ("sup-distance identity", sup_distance),
        ("convexity and barycenter non-expansion", convexity),
        ("mass-transport bound", mass_transport),
        ("lifting, pullback and reweighting", lifting),
        ("partition coupling", partitions),
        ("CLI goldens", cli_goldens),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
