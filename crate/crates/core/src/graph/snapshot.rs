//! Binary graph snapshot.
//!
//! Layout (little endian):
//!
//! ```text
//! magic   "WKRGRAPH"
//! version u32
//! flags   u32          bit 0: pageviews present, bit 1: clicks present
//! n       u64
//! m       u64
//! m x     src u32, dst u32, clicks u64, kind u8   (sorted by src, dst)
//! n x     language (u16 len + utf8), title (u32 len + utf8), views u64, clicks_in u64
//! ```

use std::io::{Read, Write};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::{Edge, EdgeKind, EdgeSet, Graph, NodeRegistry};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"WKRGRAPH";
pub const VERSION: u32 = 1;
pub const FLAG_VIEWS: u32 = 1;
pub const FLAG_CLICKS: u32 = 2;

pub fn write_graph<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    let mut flags = 0;
    if g.views.iter().any(|&v| v > 0) {
        flags |= FLAG_VIEWS;
    }
    if g.edges.edges().iter().any(|e| e.clicks > 0) {
        flags |= FLAG_CLICKS;
    }
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(VERSION)?;
    w.write_u32::<LE>(flags)?;
    w.write_u64::<LE>(g.node_count() as u64)?;
    w.write_u64::<LE>(g.edges.len() as u64)?;
    for e in g.edges.edges() {
        w.write_u32::<LE>(e.src)?;
        w.write_u32::<LE>(e.dst)?;
        w.write_u64::<LE>(e.clicks)?;
        w.write_u8(match e.kind {
            EdgeKind::Structural => 0,
            EdgeKind::ClickOnly => 1,
        })?;
    }
    for (i, key) in g.registry.keys().iter().enumerate() {
        let lang = key.language.as_bytes();
        let title = key.title.as_bytes();
        w.write_u16::<LE>(
            u16::try_from(lang.len())
                .map_err(|_| Error::Snapshot("language code too long".into()))?,
        )?;
        w.write_all(lang)?;
        w.write_u32::<LE>(title.len() as u32)?;
        w.write_all(title)?;
        w.write_u64::<LE>(g.views[i])?;
        w.write_u64::<LE>(g.clicks_in[i])?;
    }
    w.flush()?;
    Ok(())
}

fn read_string<R: Read>(r: &mut R, len: usize) -> Result<String> {
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf).map_err(|_| Error::Snapshot("string is not UTF-8".into()))
}

pub fn read_graph<R: Read>(mut r: R) -> Result<Graph> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Snapshot("bad magic, not a graph snapshot".into()));
    }
    let version = r.read_u32::<LE>()?;
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let _flags = r.read_u32::<LE>()?;
    let n = r.read_u64::<LE>()? as usize;
    let m = r.read_u64::<LE>()? as usize;
    let mut edges = Vec::with_capacity(m.min(1 << 24));
    for _ in 0..m {
        let src = r.read_u32::<LE>()?;
        let dst = r.read_u32::<LE>()?;
        let clicks = r.read_u64::<LE>()?;
        let kind = match r.read_u8()? {
            0 => EdgeKind::Structural,
            1 => EdgeKind::ClickOnly,
            k => return Err(Error::Snapshot(format!("unknown edge kind {k}"))),
        };
        edges.push(Edge {
            src,
            dst,
            clicks,
            kind,
        });
    }
    let mut registry = NodeRegistry::new();
    let mut views = Vec::with_capacity(n.min(1 << 24));
    let mut clicks_in = Vec::with_capacity(n.min(1 << 24));
    for i in 0..n {
        let lang_len = r.read_u16::<LE>()? as usize;
        let language = read_string(&mut r, lang_len)?;
        let title_len = r.read_u32::<LE>()? as usize;
        let title = read_string(&mut r, title_len)?;
        if registry.insert(&language, &title) as usize != i {
            return Err(Error::Snapshot(format!(
                "duplicate node {language}:{title}"
            )));
        }
        views.push(r.read_u64::<LE>()?);
        clicks_in.push(r.read_u64::<LE>()?);
    }
    let edges = EdgeSet::new(n, edges)?;
    Ok(Graph {
        registry,
        edges,
        views,
        clicks_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut reg = NodeRegistry::from_titles("en", ["A", "Ünïcode", "C"]);
        reg.insert("fr", "A");
        let edges = EdgeSet::new(
            4,
            vec![
                Edge {
                    src: 0,
                    dst: 1,
                    clicks: 12,
                    kind: EdgeKind::Structural,
                },
                Edge {
                    src: 3,
                    dst: 0,
                    clicks: 99,
                    kind: EdgeKind::ClickOnly,
                },
            ],
        )
        .unwrap();
        let mut g = Graph::new(reg, edges);
        g.views = vec![1, 2, 3, 4];
        g.clicks_in = vec![99, 12, 0, 0];
        let mut buf = Vec::new();
        write_graph(&mut buf, &g).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        assert_eq!(read_graph(buf.as_slice()).unwrap(), g);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_graph(&b"NOTAGRAPH..........."[..]).is_err());
    }
}
