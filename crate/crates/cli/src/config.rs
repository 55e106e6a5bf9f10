//! Sweep config files: one `key = value` per line, TOML syntax (strings in
//! quotes, vectors as `[x, y, z]`, `#` comments). See the README for keys.

use kinegroup_core::reichenbach::ShearK;
use kinegroup_core::sweep::{AddvelGrid, EllipsoidSampling};
use kinegroup_core::SpecialParams;
use nalgebra::Vector3;
use toml::{Table, Value};

#[derive(Debug)]
pub enum SweepConfig {
    Addvel(AddvelGrid),
    Ellipsoid {
        shear: ShearK,
        sampling: EllipsoidSampling,
    },
}

const ADDVEL_KEYS: &[&str] = &[
    "table", "case", "c0", "eta", "l", "r1", "r2", "a1", "lambda1", "v_min", "v_max", "steps",
];
const ELLIPSOID_KEYS: &[&str] = &[
    "table",
    "k",
    "c",
    "points",
    "seed",
    "theta_steps",
    "phi_steps",
];

/// `seed` is the command-line/environment seed; a `seed` key wins over it.
pub fn parse(text: &str, seed: Option<u64>) -> Result<SweepConfig, String> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| e.message().to_string())?;
    let kind = string(&table, "table")?.ok_or("missing key `table`")?;
    match kind.as_str() {
        "addvel" => {
            check_keys(&table, ADDVEL_KEYS)?;
            let case = string(&table, "case")?.ok_or("missing key `case`")?;
            let get = |k: &str, default: f64| number(&table, k).map(|v| v.unwrap_or(default));
            let params = match case.as_str() {
                "galilean" => SpecialParams::Galilean,
                "exp" => SpecialParams::Exp {
                    a1: get("a1", 0.0)?,
                    lambda1: get("lambda1", 0.0)?,
                },
                "power" => SpecialParams::Power {
                    l: get("l", 0.0)?,
                    r1: get("r1", 0.0)?,
                    r2: get("r2", 0.0)?,
                },
                "bounded" => SpecialParams::Bounded {
                    c0: get("c0", 1.0)?,
                    eta: get("eta", 0.0)?,
                    r1: get("r1", 0.0)?,
                    r2: get("r2", 0.0)?,
                },
                other => return Err(format!("unknown case `{other}`")),
            };
            Ok(SweepConfig::Addvel(AddvelGrid {
                params,
                v_min: number(&table, "v_min")?.ok_or("missing key `v_min`")?,
                v_max: number(&table, "v_max")?.ok_or("missing key `v_max`")?,
                steps: count(&table, "steps")?.ok_or("missing key `steps`")?,
            }))
        }
        "ellipsoid" => {
            check_keys(&table, ELLIPSOID_KEYS)?;
            let k = vector(&table, "k")?.ok_or("missing key `k`")?;
            let c = number(&table, "c")?.unwrap_or(1.0);
            let shear = ShearK::unscaled(k, c).map_err(|e| e.to_string())?;
            let sampling = match (
                count(&table, "points")?,
                count(&table, "theta_steps")?,
                count(&table, "phi_steps")?,
            ) {
                (Some(points), None, None) => {
                    let seed = match table.get("seed") {
                        Some(_) => count(&table, "seed")?.map(|s| s as u64),
                        None => seed,
                    };
                    let seed =
                        seed.ok_or("random sampling needs `seed`, --seed or KINEGROUP_SEED")?;
                    EllipsoidSampling::Random { points, seed }
                }
                (None, Some(theta_steps), Some(phi_steps)) => EllipsoidSampling::Grid {
                    theta_steps,
                    phi_steps,
                },
                _ => {
                    return Err("give either `points` or both `theta_steps` and `phi_steps`".into())
                }
            };
            Ok(SweepConfig::Ellipsoid { shear, sampling })
        }
        other => Err(format!(
            "unknown table `{other}` (expected addvel or ellipsoid)"
        )),
    }
}

fn check_keys(table: &Table, allowed: &[&str]) -> Result<(), String> {
    match table.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(format!("unknown key `{k}`")),
        None => Ok(()),
    }
}

fn string(table: &Table, key: &str) -> Result<Option<String>, String> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(v) => Err(format!("`{key}` must be a string, got {v}")),
    }
}

fn number(table: &Table, key: &str) -> Result<Option<f64>, String> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Float(x)) => Ok(Some(*x)),
        Some(Value::Integer(i)) => Ok(Some(*i as f64)),
        Some(v) => Err(format!("`{key}` must be a number, got {v}")),
    }
}

fn count(table: &Table, key: &str) -> Result<Option<usize>, String> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
        Some(v) => Err(format!("`{key}` must be a non-negative integer, got {v}")),
    }
}

fn vector(table: &Table, key: &str) -> Result<Option<Vector3<f64>>, String> {
    let Some(value) = table.get(key) else {
        return Ok(None);
    };
    let bad = || format!("`{key}` must be an array of three numbers");
    let items = value.as_array().ok_or_else(bad)?;
    if items.len() != 3 {
        return Err(bad());
    }
    let mut out = Vector3::zeros();
    for (i, item) in items.iter().enumerate() {
        out[i] = match item {
            Value::Float(x) => *x,
            Value::Integer(n) => *n as f64,
            _ => return Err(bad()),
        };
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addvel_config() {
        let cfg = parse(
            "# Lorentz grid\ntable = \"addvel\"\ncase = \"bounded\"\nc0 = 1\nv_min = -0.9\nv_max = 0.9\nsteps = 11\n",
            None,
        )
        .unwrap();
        let SweepConfig::Addvel(g) = cfg else {
            panic!()
        };
        assert_eq!(g.params, SpecialParams::lorentz(1.0));
        assert_eq!(g.steps, 11);
    }

    #[test]
    fn ellipsoid_seed_precedence() {
        let text = "table = \"ellipsoid\"\nk = [0.5, 0, 0]\npoints = 10\n";
        assert!(parse(text, None).is_err());
        let SweepConfig::Ellipsoid { sampling, .. } = parse(text, Some(3)).unwrap() else {
            panic!()
        };
        assert_eq!(
            sampling,
            EllipsoidSampling::Random {
                points: 10,
                seed: 3
            }
        );
        let with_key = format!("{text}seed = 9\n");
        let SweepConfig::Ellipsoid { sampling, .. } = parse(&with_key, Some(3)).unwrap() else {
            panic!()
        };
        assert_eq!(
            sampling,
            EllipsoidSampling::Random {
                points: 10,
                seed: 9
            }
        );
    }

    #[test]
    fn rejects_typos() {
        assert!(
            parse("table = \"addvel\"\ncase = \"bounded\"\nstep = 3\n", None)
                .unwrap_err()
                .contains("step")
        );
        assert!(parse("table = addvel\n", None).is_err());
    }
}
