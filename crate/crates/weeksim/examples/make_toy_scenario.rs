//! Writes the bundled toy scenario: 10 zones, a synthetic survey of week
//! programs and zonal marginals for about 1000 persons.
//!
//! ```text
//! cargo run -p weeksim --example make_toy_scenario -- crates/weeksim/scenarios/toy
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ZONES: usize = 10;
const FLEXIBLE: [&str; 10] = [
    "business",
    "service",
    "private_business",
    "private_visit",
    "shopping_daily",
    "shopping_other",
    "leisure_indoor",
    "leisure_outdoor",
    "leisure_other",
    "strolling",
];
const DISTRICTS: [&str; ZONES] = [
    "stuttgart",
    "stuttgart",
    "stuttgart",
    "stuttgart",
    "LB",
    "LB",
    "ES",
    "BB",
    "WN",
    "GP",
];
const COORDS: [(f64, f64); ZONES] = [
    (0.0, 0.0),
    (3.8, 0.6),
    (-2.5, 2.8),
    (1.0, -3.5),
    (4.0, 9.0),
    (8.0, 12.0),
    (10.0, -6.0),
    (-9.0, -7.0),
    (13.0, 4.0),
    (19.0, 1.0),
];
const HOUSEHOLDS_PER_ZONE: [u32; ZONES] = [86, 60, 54, 49, 43, 43, 38, 38, 32, 32];
const TYPES: [&str; 4] = ["single", "couple", "family", "senior"];

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("crates/weeksim/scenarios/toy"));
    fs::create_dir_all(dir.join("matrices")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20_140_501);
    let dist = distances();
    write_zones(&dir);
    write_matrices(&dir, &dist);
    let survey = survey(&mut rng);
    write_survey(&dir, &survey);
    write_marginals(&dir, &survey, &mut rng);
    fs::write(dir.join("fleet.csv"), "zone_id,cars\n1,8\n2,4\n3,3\n").unwrap();
    println!("wrote {}", dir.display());
}

fn distances() -> [[f64; ZONES]; ZONES] {
    let mut d = [[0.0; ZONES]; ZONES];
    for i in 0..ZONES {
        for j in 0..ZONES {
            d[i][j] = if i == j {
                0.6 + 0.05 * i as f64
            } else {
                let (dx, dy) = (COORDS[i].0 - COORDS[j].0, COORDS[i].1 - COORDS[j].1);
                round2(1.3 * (dx * dx + dy * dy).sqrt())
            };
        }
    }
    d[0][1] = 5.0;
    d[1][0] = 5.0;
    d
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Jobs, school places and per-purpose opportunities of zone `k`.
fn size(k: usize) -> f64 {
    [900.0, 420.0, 300.0, 260.0, 350.0, 200.0, 240.0, 180.0, 160.0, 120.0][k]
}

fn write_zones(dir: &Path) {
    let mut s = String::from("zone_id,freefloating,stations,district");
    for p in FLEXIBLE {
        write!(s, ",attr_{p}").unwrap();
    }
    s.push('\n');
    let stations = [2, 1, 0, 1, 0, 0, 0, 0, 0, 0];
    for k in 0..ZONES {
        write!(s, "{},{},{},{}", k + 1, u8::from(k < 3), stations[k], DISTRICTS[k]).unwrap();
        for (q, _) in FLEXIBLE.iter().enumerate() {
            let a = size(k) * (0.4 + 0.1 * ((k + q) % 7) as f64);
            write!(s, ",{}", a.round()).unwrap();
        }
        s.push('\n');
    }
    fs::write(dir.join("zones.csv"), s).unwrap();
}

fn write_matrix(path: &Path, f: impl Fn(usize, usize) -> f64) {
    let mut s = String::from("zone_id");
    for j in 0..ZONES {
        write!(s, ",{}", j + 1).unwrap();
    }
    s.push('\n');
    for i in 0..ZONES {
        write!(s, "{}", i + 1).unwrap();
        for j in 0..ZONES {
            write!(s, ",{}", round2(f(i, j))).unwrap();
        }
        s.push('\n');
    }
    fs::write(path, s).unwrap();
}

fn write_matrices(dir: &Path, d: &[[f64; ZONES]; ZONES]) {
    let m = dir.join("matrices");
    let car = |i: usize, j: usize| 2.0 + 1.2 * d[i][j];
    write_matrix(&m.join("distance.csv"), |i, j| d[i][j]);
    write_matrix(&m.join("time_walking.csv"), |i, j| 12.0 * d[i][j]);
    write_matrix(&m.join("cost_walking.csv"), |_, _| 0.0);
    write_matrix(&m.join("time_cycling.csv"), |i, j| 1.0 + 4.0 * d[i][j]);
    write_matrix(&m.join("cost_cycling.csv"), |_, _| 0.0);
    write_matrix(&m.join("time_public_transport.csv"), |i, j| 7.0 + 2.2 * d[i][j]);
    write_matrix(&m.join("cost_public_transport.csv"), |i, j| {
        (1.5 + 0.15 * d[i][j]).min(5.0)
    });
    write_matrix(&m.join("time_car_driver.csv"), car);
    write_matrix(&m.join("cost_car_driver.csv"), |i, j| 0.24 * d[i][j]);
    write_matrix(&m.join("time_car_passenger.csv"), car);
    write_matrix(&m.join("cost_car_passenger.csv"), |_, _| 0.0);
    write_matrix(&m.join("time_carsharing_station.csv"), |i, j| car(i, j) + 4.0);
    write_matrix(&m.join("cost_carsharing_station.csv"), |i, j| 0.5 + 0.3 * d[i][j]);
    write_matrix(&m.join("time_carsharing_freefloat.csv"), |i, j| car(i, j) + 3.0);
    write_matrix(&m.join("cost_carsharing_freefloat.csv"), |i, j| 0.31 * car(i, j));
    let commute = |i: usize, j: usize, scale: f64| (size(j) * (-0.15 * d[i][j]).exp() * scale).round();
    write_matrix(&dir.join("matrices/commuting_work.csv"), |i, j| commute(i, j, 1.0));
    write_matrix(&dir.join("matrices/commuting_education.csv"), |i, j| commute(i, j, 0.3));
}

struct Person {
    sex: &'static str,
    age: &'static str,
    employment: &'static str,
    license: bool,
    car_availability: &'static str,
    commute_km: f64,
    program: Vec<(&'static str, u32, u32)>,
}

struct Household {
    kind: &'static str,
    cars: u32,
    members: Vec<Person>,
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[(&'a str, f64)]) -> &'a str {
    let total: f64 = items.iter().map(|(_, w)| w).sum();
    let mut u = rng.gen::<f64>() * total;
    for (item, w) in items {
        if u < *w {
            return item;
        }
        u -= w;
    }
    items[items.len() - 1].0
}

fn adult<R: Rng>(rng: &mut R, senior: bool) -> (&'static str, &'static str, &'static str) {
    let sex = if rng.gen_bool(0.5) { "female" } else { "male" };
    if senior {
        return (sex, pick(rng, &[("61-70", 0.5), ("71+", 0.5)]), "retired");
    }
    let age = pick(
        rng,
        &[("18-25", 0.15), ("26-35", 0.25), ("36-50", 0.35), ("51-60", 0.25)],
    );
    let employment = pick(
        rng,
        &[
            ("fulltime", 0.5),
            ("parttime", 0.18),
            ("unemployed", 0.06),
            ("homemaker", 0.08),
            ("vocational", 0.05),
            ("student_tertiary", if age == "18-25" { 0.4 } else { 0.0 }),
            ("other", 0.03),
        ],
    );
    (sex, age, employment)
}

fn survey<R: Rng>(rng: &mut R) -> Vec<Household> {
    let mut out = Vec::new();
    for k in 0..120 {
        let kind = TYPES[k % TYPES.len()];
        let mut attrs = Vec::new();
        match kind {
            "single" => attrs.push(adult(rng, false)),
            "couple" => {
                attrs.push(adult(rng, false));
                attrs.push(adult(rng, false));
            }
            "family" => {
                attrs.push(adult(rng, false));
                attrs.push(adult(rng, false));
                for _ in 0..rng.gen_range(1..=2) {
                    let sex = if rng.gen_bool(0.5) { "female" } else { "male" };
                    attrs.push((sex, "10-17", "student_secondary"));
                }
            }
            _ => {
                for _ in 0..rng.gen_range(1..=2) {
                    attrs.push(adult(rng, true));
                }
            }
        }
        let adults = attrs.iter().filter(|a| a.1 != "10-17").count() as u32;
        let cars = match rng.gen_range(0..10) {
            0..=1 => 0,
            2..=7 => 1,
            _ => adults.min(2),
        };
        let members = attrs
            .into_iter()
            .map(|(sex, age, employment)| {
                let license = age != "10-17" && rng.gen_bool(0.88);
                let car_availability = if !license || cars == 0 {
                    "none"
                } else if cars >= adults {
                    "personal"
                } else {
                    "after_consultation"
                };
                let program = program(rng, employment);
                let commutes = program.iter().any(|a| a.0 == "work" || a.0 == "education");
                let commute_km = if commutes {
                    round2((0.5 + rng.gen::<f64>() * 3.0).exp().min(40.0))
                } else {
                    0.0
                };
                Person {
                    sex,
                    age,
                    employment,
                    license,
                    car_availability,
                    commute_km,
                    program,
                }
            })
            .collect();
        out.push(Household { kind, cars, members });
    }
    out
}

fn errand<R: Rng>(rng: &mut R, day: u32) -> &'static str {
    if day == 6 {
        pick(
            rng,
            &[
                ("private_visit", 0.3),
                ("leisure_outdoor", 0.25),
                ("leisure_indoor", 0.15),
                ("leisure_other", 0.1),
                ("strolling", 0.2),
            ],
        )
    } else if day == 5 {
        pick(
            rng,
            &[
                ("shopping_daily", 0.3),
                ("shopping_other", 0.25),
                ("private_visit", 0.15),
                ("leisure_outdoor", 0.1),
                ("leisure_indoor", 0.1),
                ("strolling", 0.1),
            ],
        )
    } else {
        pick(
            rng,
            &[
                ("shopping_daily", 0.3),
                ("service", 0.08),
                ("private_business", 0.15),
                ("private_visit", 0.1),
                ("shopping_other", 0.1),
                ("leisure_indoor", 0.08),
                ("leisure_outdoor", 0.07),
                ("leisure_other", 0.07),
                ("business", 0.05),
            ],
        )
    }
}

/// Out-of-home activities per day laid out with travel gaps, joined by home
/// activities. Returns (purpose, start, duration) in order.
fn program<R: Rng>(rng: &mut R, employment: &str) -> Vec<(&'static str, u32, u32)> {
    let mut out: Vec<(&'static str, u32, u32)> = Vec::new();
    let mut home_start = 0;
    let anchor_start = rng.gen_range(0..60);
    for day in 0..7u32 {
        let base = day * 1440;
        let weekday = day < 5;
        let mut acts: Vec<(&'static str, u32)> = Vec::new();
        let mut start = base;
        match employment {
            "fulltime" | "vocational" if weekday => {
                start += 420 + anchor_start;
                acts.push(("work", 480 + rng.gen_range(0..4) * 15));
            }
            "parttime" if weekday && day != 2 => {
                start += 480 + anchor_start;
                acts.push(("work", 270));
            }
            "student_secondary" if weekday => {
                start += 450;
                acts.push(("education", 330 + rng.gen_range(0..3) * 45));
            }
            "student_tertiary" if weekday => {
                start += 540 + anchor_start;
                acts.push(("education", 240 + rng.gen_range(0..4) * 30));
            }
            _ => start += 540 + rng.gen_range(0..180),
        }
        let errands = match rng.gen_range(0..10) {
            0..=2 => 0,
            3..=7 => 1,
            _ => 2,
        };
        for _ in 0..errands {
            let p = errand(rng, day);
            let dur = match p {
                "shopping_daily" | "service" | "private_business" => rng.gen_range(15..60),
                "strolling" => rng.gen_range(30..90),
                _ => rng.gen_range(60..180),
            };
            acts.push((p, dur));
        }
        if acts.is_empty() {
            continue;
        }
        let depart = start - rng.gen_range(15..35);
        if out.is_empty() {
            out.push(("home", 0, depart));
        } else {
            let last = out.len() - 1;
            out[last].2 = depart - home_start;
        }
        let mut t = start;
        for (k, (p, dur)) in acts.iter().enumerate() {
            if k > 0 {
                t += rng.gen_range(10..30);
            }
            if t + dur > base + 1380 {
                break;
            }
            out.push((p, t, *dur));
            t += dur;
        }
        home_start = t + rng.gen_range(15..35);
        out.push(("home", home_start, 1));
    }
    match out.last_mut() {
        Some(last) => last.2 = 10080 - last.1,
        None => out.push(("home", 0, 10080)),
    }
    out
}

fn write_survey(dir: &Path, survey: &[Household]) {
    let mut hh = String::from("household_id,household_type,n_cars\n");
    let mut persons =
        String::from("person_id,household_id,sex,age_group,employment,license,car_availability,commute_km\n");
    let mut acts = String::from("person_id,purpose,start_min,duration_min\n");
    let mut pid = 1;
    for (k, h) in survey.iter().enumerate() {
        let hid = k + 1;
        writeln!(hh, "{hid},{},{}", h.kind, h.cars).unwrap();
        for p in &h.members {
            writeln!(
                persons,
                "{pid},{hid},{},{},{},{},{},{}",
                p.sex,
                p.age,
                p.employment,
                u8::from(p.license),
                p.car_availability,
                p.commute_km
            )
            .unwrap();
            for (purpose, start, dur) in &p.program {
                writeln!(acts, "{pid},{purpose},{start},{dur}").unwrap();
            }
            pid += 1;
        }
    }
    fs::create_dir_all(dir.join("survey")).unwrap();
    fs::write(dir.join("survey/households.csv"), hh).unwrap();
    fs::write(dir.join("survey/persons.csv"), persons).unwrap();
    fs::write(dir.join("survey/activities.csv"), acts).unwrap();
}

/// Household counts per type and person counts per sex, perturbed around
/// the survey composition so the fit has work to do.
fn write_marginals<R: Rng>(dir: &Path, survey: &[Household], rng: &mut R) {
    let mut per_type = [0.0f64; 4];
    let mut female = [0.0f64; 4];
    let mut male = [0.0f64; 4];
    for h in survey {
        let t = TYPES.iter().position(|x| *x == h.kind).unwrap();
        per_type[t] += 1.0;
        for p in &h.members {
            if p.sex == "female" {
                female[t] += 1.0;
            } else {
                male[t] += 1.0;
            }
        }
    }
    let mut s = String::from("zone_id");
    for t in TYPES {
        write!(s, ",household:{t}").unwrap();
    }
    s.push_str(",sex:female,sex:male\n");
    let shares = [
        [0.40, 0.25, 0.20, 0.15],
        [0.35, 0.25, 0.25, 0.15],
        [0.30, 0.25, 0.30, 0.15],
        [0.25, 0.25, 0.35, 0.15],
        [0.20, 0.25, 0.35, 0.20],
        [0.20, 0.30, 0.30, 0.20],
        [0.20, 0.25, 0.35, 0.20],
        [0.15, 0.25, 0.40, 0.20],
        [0.15, 0.30, 0.35, 0.20],
        [0.15, 0.25, 0.35, 0.25],
    ];
    for k in 0..ZONES {
        let counts: Vec<f64> = shares[k]
            .iter()
            .map(|sh| (sh * f64::from(HOUSEHOLDS_PER_ZONE[k])).round())
            .collect();
        let (mut f, mut m) = (0.0, 0.0);
        for t in 0..4 {
            f += counts[t] * female[t] / per_type[t];
            m += counts[t] * male[t] / per_type[t];
        }
        let tilt = 1.0 + rng.gen_range(-0.04..0.04);
        write!(s, "{}", k + 1).unwrap();
        for c in &counts {
            write!(s, ",{c}").unwrap();
        }
        writeln!(s, ",{},{}", round2(f * tilt), round2(m * (2.0 - tilt))).unwrap();
    }
    fs::write(dir.join("marginals.csv"), s).unwrap();
}
