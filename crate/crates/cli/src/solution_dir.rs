//! Reading and writing solution directories.
//!
//! A directory holds `strategy_<p>.json` and `certificate_<p>.json` per
//! process (and/or `.dot` renderings) plus `report.json`.

use std::fs;
use std::path::Path;

use serde_json::json;

use certsynth::architecture::Architecture;
use certsynth::machines::{GuaranteeTs, MachineFile, Strategy};
use certsynth::synthesis::Solution;

use crate::Format;

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write `{}`: {e}", path.display()))
}

pub fn write_solution(dir: &Path, solution: &Solution, format: Format) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create `{}`: {e}", dir.display()))?;
    for p in &solution.processes {
        let name = &p.name;
        if format != Format::Dot {
            let s = MachineFile::from_strategy(&p.strategy).with_process(name);
            let g = MachineFile::from_certificate(&p.certificate).with_process(name);
            write(&dir.join(format!("strategy_{name}.json")), &to_json(&s))?;
            write(&dir.join(format!("certificate_{name}.json")), &to_json(&g))?;
        }
        if format != Format::Json {
            write(&dir.join(format!("strategy_{name}.dot")), &p.strategy.to_dot(&format!("s_{name}")))?;
            write(&dir.join(format!("certificate_{name}.dot")), &p.certificate.0.to_dot(&format!("g_{name}")))?;
        }
    }
    let report = json!({
        "realizable": true,
        "mode": solution.mode,
        "bounds": solution.bounds,
        "attempts": solution.attempts,
        "warnings": solution.warnings,
        "verification": solution.report,
    });
    write(&dir.join("report.json"), &(serde_json::to_string_pretty(&report).expect("json") + "\n"))
}

fn to_json(m: &MachineFile) -> String {
    serde_json::to_string_pretty(m).expect("json") + "\n"
}

fn read_machine(path: &Path) -> Result<MachineFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("`{}`: {e}", path.display()))
}

/// Complete strategies and certificates, in architecture order.
pub fn read_solution(dir: &Path, arch: &Architecture) -> Result<Vec<(Strategy, GuaranteeTs)>, String> {
    arch.processes
        .iter()
        .map(|p| {
            let sp = dir.join(format!("strategy_{}.json", p.name));
            let gp = dir.join(format!("certificate_{}.json", p.name));
            let s = read_machine(&sp)?
                .to_strategy()
                .map_err(|e| format!("`{}`: {e}", sp.display()))?;
            let g = read_machine(&gp)?
                .to_certificate()
                .map_err(|e| format!("`{}`: {e}", gp.display()))?;
            Ok((s, g))
        })
        .collect()
}
