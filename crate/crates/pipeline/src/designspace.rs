// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::build::MasterSet;
use crate::manifest::{Location, Manifest};
use crate::ufo::{escape, write_ufo, UfoMetadata};
use crate::write::write_atomic;
use crate::{Error, Result};

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn location_xml(out: &mut String, manifest: &Manifest, loc: &Location) {
    out.push_str("      <location>\n");
    for a in &manifest.axes {
        let v = loc.get(&a.tag).copied().unwrap_or(a.default);
        let _ = writeln!(
            out,
            "        <dimension name=\"{}\" xvalue=\"{}\"/>",
            escape(&a.name),
            num(v)
        );
    }
    out.push_str("      </location>\n");
}

fn compact(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Writes a designspace (format 4.1) document for `set`. `ufo_files` maps
/// each master name to its UFO, relative to the document; every UFO must
/// already exist.
pub fn write_designspace(set: &MasterSet, ufo_files: &BTreeMap<String, PathBuf>, out: &Path) -> Result<()> {
    let m = &set.manifest;
    let base = out.parent().unwrap_or(Path::new(""));
    for master in &m.masters {
        let rel = ufo_files
            .get(&master.name)
            .ok_or_else(|| Error::Package(format!("no UFO given for master `{}`", master.name)))?;
        if !base.join(rel).is_dir() {
            return Err(Error::Package(format!(
                "master `{}`: UFO {} does not exist",
                master.name,
                base.join(rel).display()
            )));
        }
    }
    let family = &m.font.family;
    let default = m.default_master();
    let mut doc = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<designspace format=\"4.1\">\n");
    doc.push_str("  <axes>\n");
    for a in &m.axes {
        let _ = writeln!(
            doc,
            "    <axis tag=\"{}\" name=\"{}\" minimum=\"{}\" maximum=\"{}\" default=\"{}\"/>",
            escape(&a.tag),
            escape(&a.name),
            num(a.min),
            num(a.max),
            num(a.default)
        );
    }
    doc.push_str("  </axes>\n  <sources>\n");
    for (i, master) in m.masters.iter().enumerate() {
        let _ = writeln!(
            doc,
            "    <source filename=\"{}\" name=\"{}\" familyname=\"{}\" stylename=\"{}\">",
            escape(&ufo_files[&master.name].to_string_lossy().replace('\\', "/")),
            escape(&format!("{family} {}", master.name)),
            escape(family),
            escape(&master.name)
        );
        if Some(i) == default {
            doc.push_str("      <info copy=\"1\"/>\n");
        }
        location_xml(&mut doc, m, &master.location);
        doc.push_str("    </source>\n");
    }
    doc.push_str("  </sources>\n");
    if !m.instances.is_empty() {
        doc.push_str("  <instances>\n");
        for inst in &m.instances {
            let _ = writeln!(
                doc,
                "    <instance name=\"{}\" familyname=\"{}\" stylename=\"{}\" filename=\"instances/{}-{}.ufo\">",
                escape(&format!("{family} {}", inst.name)),
                escape(family),
                escape(&inst.name),
                escape(&compact(family)),
                escape(&compact(&inst.name))
            );
            location_xml(&mut doc, m, &inst.location);
            doc.push_str("    </instance>\n");
        }
        doc.push_str("  </instances>\n");
    }
    doc.push_str("</designspace>\n");
    write_atomic(out, doc.as_bytes())
}

/// Writes one UFO per master under `out/masters` and the designspace
/// document next to them. Returns the designspace path.
pub fn emit_package(set: &MasterSet, out: &Path) -> Result<PathBuf> {
    let m = &set.manifest;
    let family = compact(&m.font.family);
    let files: BTreeMap<String, PathBuf> = set
        .masters
        .iter()
        .map(|g| (g.name.clone(), PathBuf::from(format!("masters/{family}-{}.ufo", compact(&g.name)))))
        .collect();
    set.masters.par_iter().try_for_each(|g| {
        let meta = UfoMetadata {
            family: m.font.family.clone(),
            style: g.name.clone(),
            version: m.font.version.clone(),
        };
        write_ufo(g, &meta, &out.join(&files[&g.name]))
    })?;
    let ds = out.join(format!("{family}.designspace"));
    write_designspace(set, &files, &ds)?;
    Ok(ds)
}
