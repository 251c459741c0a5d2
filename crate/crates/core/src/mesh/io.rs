use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{FeatureTags, TriMesh};
use crate::{Error, Result, Vec3};

/// Reads an OBJ file and an optional feature-tag file.
pub fn load_obj(path: &Path, feature_tags: Option<&Path>) -> Result<TriMesh> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mesh = parse_obj(&text, &path.display().to_string())?;
    match feature_tags {
        None => Ok(mesh),
        Some(tp) => {
            let tags_text = fs::read_to_string(tp).map_err(|e| Error::io(tp, e))?;
            let tags = parse_feature_tags(&tags_text, &tp.display().to_string())?;
            mesh.with_features(&tags)
        }
    }
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_floats(path: &str, line: usize, fields: &[&str]) -> Result<Vec3> {
    if fields.len() < 3 {
        return Err(parse_err(path, line, "expected three coordinates"));
    }
    let mut v = [0.0; 3];
    for (k, f) in fields.iter().take(3).enumerate() {
        v[k] = f
            .parse::<f64>()
            .map_err(|_| parse_err(path, line, format!("invalid number '{f}'")))?;
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// Parses OBJ text. Only `v`, `vn` and triangular `f` records are used;
/// other records are ignored. `source` names the input in error messages.
pub fn parse_obj(text: &str, source: &str) -> Result<TriMesh> {
    let mut verts = Vec::new();
    let mut normals = Vec::new();
    let mut tris = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        let mut it = body.split_whitespace();
        let Some(tag) = it.next() else { continue };
        let fields: Vec<&str> = it.collect();
        match tag {
            "v" => verts.push(parse_floats(source, line, &fields)?),
            "vn" => normals.push(parse_floats(source, line, &fields)?),
            "f" => {
                if fields.len() != 3 {
                    return Err(parse_err(
                        source,
                        line,
                        format!("only triangles are supported, found {} corners", fields.len()),
                    ));
                }
                let mut t = [0usize; 3];
                for (k, f) in fields.iter().enumerate() {
                    let idx = f.split('/').next().unwrap_or("");
                    let i: i64 = idx
                        .parse()
                        .map_err(|_| parse_err(source, line, format!("invalid index '{f}'")))?;
                    let n = verts.len() as i64;
                    let i = if i < 0 { n + i } else { i - 1 };
                    if i < 0 {
                        return Err(parse_err(source, line, format!("index '{f}' out of range")));
                    }
                    t[k] = i as usize;
                }
                tris.push(t);
            }
            _ => {}
        }
    }
    if let Some((f, _)) = tris
        .iter()
        .enumerate()
        .find(|(_, t)| t.iter().any(|&i| i >= verts.len()))
    {
        return Err(parse_err(
            source,
            0,
            format!("face {} references a vertex beyond the {} defined", f + 1, verts.len()),
        ));
    }
    let mesh = TriMesh::new(verts, tris)?;
    if normals.is_empty() {
        Ok(mesh)
    } else if normals.len() != mesh.num_vertices() {
        Err(parse_err(
            source,
            0,
            format!(
                "{} vn records for {} vertices; normals must be per vertex",
                normals.len(),
                mesh.num_vertices()
            ),
        ))
    } else {
        mesh.with_vertex_normals(normals)
    }
}

/// Parses a feature-tag file: `e i j` or `i j` for an edge, `c i` for a
/// corner, 1-based indices, `#` comments.
pub fn parse_feature_tags(text: &str, source: &str) -> Result<FeatureTags> {
    let mut tags = FeatureTags::default();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let idx = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(parse_err(source, line, format!("invalid vertex index '{s}'"))),
            }
        };
        match fields.as_slice() {
            ["c", i] => tags.corners.push(idx(i)?),
            ["e", i, j] | [i, j] => tags.edges.push((idx(i)?, idx(j)?)),
            _ => return Err(parse_err(source, line, format!("unrecognized record '{body}'"))),
        }
    }
    Ok(tags)
}

/// Writes vertices (and normals, if present) and faces as OBJ. Coordinates
/// use the shortest representation that round-trips exactly.
pub fn write_obj(mesh: &TriMesh, path: &Path) -> Result<()> {
    let mut s = String::new();
    for v in mesh.vertices() {
        writeln!(s, "v {} {} {}", v.x, v.y, v.z).unwrap();
    }
    if let Some(ns) = mesh.vertex_normals() {
        for n in ns {
            writeln!(s, "vn {} {} {}", n.x, n.y, n.z).unwrap();
        }
    }
    for t in mesh.triangles() {
        writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}
