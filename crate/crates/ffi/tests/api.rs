use std::ffi::{c_char, CStr, CString};
use std::ptr;

use roabp_pit_ffi::*;

const SUM: &str = include_str!("../../core/fixtures/sum_x1_x2.roabp");
const CHAR2: &str = include_str!("../../core/fixtures/char2_counterexample.roabp");
const COMMUTATIVE: &str = include_str!("../../core/fixtures/commutative.roabp");
const ZERO: &str = include_str!("../../core/fixtures/zero.roabp");

fn parse(text: &str, prime: u64) -> Result<*mut RoabpInstance, RoabpStatus> {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    match unsafe { roabp_instance_parse(c.as_ptr(), prime, &mut out) } {
        RoabpStatus::Ok => Ok(out),
        s => Err(s),
    }
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe { roabp_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn parse_info_eval_free() {
    let h = parse(SUM, 0).unwrap();
    let mut info = RoabpInfo {
        kind: RoabpKind::Setml,
        prime: 0,
        nvars: 0,
        degree: 0,
        width: 0,
    };
    assert_eq!(unsafe { roabp_instance_info(h, &mut info) }, RoabpStatus::Ok);
    assert_eq!(
        info,
        RoabpInfo {
            kind: RoabpKind::Roabp,
            prime: 10007,
            nvars: 2,
            degree: 1,
            width: 2
        }
    );
    let mut v = 0;
    assert_eq!(
        unsafe { roabp_instance_eval(h, [3u64, 5].as_ptr(), 2, &mut v) },
        RoabpStatus::Ok
    );
    assert_eq!(v, 8);
    assert_eq!(
        unsafe { roabp_instance_eval(h, [3u64].as_ptr(), 1, &mut v) },
        RoabpStatus::Shape
    );
    assert!(last_error().contains("point of length 1"));
    unsafe { roabp_instance_free(h) };
    unsafe { roabp_instance_free(ptr::null_mut()) };
}

#[test]
fn serialize_round_trips_through_the_buffer_protocol() {
    let h = parse(COMMUTATIVE, 0).unwrap();
    let mut needed = 0;
    assert_eq!(
        unsafe { roabp_instance_serialize(h, ptr::null_mut(), 0, &mut needed) },
        RoabpStatus::BufferTooSmall
    );
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(
        unsafe { roabp_instance_serialize(h, buf.as_mut_ptr(), needed, &mut needed) },
        RoabpStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned();
    assert_eq!(text.len() + 1, needed);
    let again = parse(&text, 0).unwrap();
    let mut again_buf = vec![0 as c_char; needed];
    unsafe { roabp_instance_serialize(again, again_buf.as_mut_ptr(), needed, ptr::null_mut()) };
    assert_eq!(buf, again_buf);
    unsafe {
        roabp_instance_free(h);
        roabp_instance_free(again);
    }
}

#[test]
fn parse_errors_are_reported() {
    assert_eq!(
        parse("roabp-instance v1\nkind nope\n", 0).unwrap_err(),
        RoabpStatus::Parse
    );
    assert!(last_error().contains("line 2"));
    assert_eq!(parse(SUM, 4).unwrap_err(), RoabpStatus::Parse);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { roabp_instance_parse(ptr::null(), 0, &mut out) },
        RoabpStatus::NullPointer
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { roabp_instance_parse(bad.as_ptr() as *const c_char, 0, &mut out) },
        RoabpStatus::InvalidUtf8
    );
}

#[test]
fn degree_bound_and_hitting_set() {
    let mut b = 0;
    assert_eq!(unsafe { roabp_degree_bound(4, 2, 2, &mut b) }, RoabpStatus::Ok);
    assert_eq!(b, 32);
    assert_eq!(
        unsafe { roabp_degree_bound(1 << 20, 1000, 1000, &mut b) },
        RoabpStatus::Capacity
    );

    let mut needed = 0;
    assert_eq!(
        unsafe { roabp_hitting_set(10007, 4, 2, 2, ptr::null_mut(), 0, &mut needed) },
        RoabpStatus::BufferTooSmall
    );
    assert_eq!(needed, 33 * 4);
    let mut pts = vec![0u64; needed];
    assert_eq!(
        unsafe { roabp_hitting_set(10007, 4, 2, 2, pts.as_mut_ptr(), needed, &mut needed) },
        RoabpStatus::Ok
    );
    assert_eq!(&pts[..4], &[0, 0, 0, 0]);
    assert_eq!(
        unsafe { roabp_hitting_set(31, 4, 2, 2, pts.as_mut_ptr(), needed, &mut needed) },
        RoabpStatus::Characteristic
    );
    assert_eq!(
        unsafe { roabp_hitting_set(33, 4, 2, 2, pts.as_mut_ptr(), needed, &mut needed) },
        RoabpStatus::InvalidModulus
    );
}

#[test]
fn identity_tests() {
    let mut verdict = RoabpVerdict::Zero;
    let mut witness = [0u64; 2];

    let sum = parse(SUM, 0).unwrap();
    assert_eq!(
        unsafe { roabp_pit_known_order(sum, &mut verdict, witness.as_mut_ptr()) },
        RoabpStatus::Ok
    );
    assert_eq!(verdict, RoabpVerdict::Nonzero);
    assert_eq!(witness, [1, 2]);

    let zero = parse(ZERO, 0).unwrap();
    assert_eq!(
        unsafe { roabp_pit_known_order(zero, &mut verdict, ptr::null_mut()) },
        RoabpStatus::Ok
    );
    assert_eq!(verdict, RoabpVerdict::Zero);
    assert_eq!(
        unsafe { roabp_pit_commutative(zero, 0, &mut verdict, ptr::null_mut()) },
        RoabpStatus::Ok
    );
    assert_eq!(verdict, RoabpVerdict::Zero);

    let char2 = parse(CHAR2, 0).unwrap();
    assert_eq!(
        unsafe { roabp_pit_known_order(char2, &mut verdict, ptr::null_mut()) },
        RoabpStatus::Characteristic
    );

    let comm = parse(COMMUTATIVE, 0).unwrap();
    let mut w3 = [0u64; 3];
    assert_eq!(
        unsafe { roabp_pit_commutative(comm, 0, &mut verdict, w3.as_mut_ptr()) },
        RoabpStatus::Ok
    );
    assert_eq!(verdict, RoabpVerdict::Nonzero);
    let mut v = 0;
    unsafe { roabp_instance_eval(comm, w3.as_ptr(), 3, &mut v) };
    assert_ne!(v, 0);

    for h in [sum, zero, char2, comm] {
        unsafe { roabp_instance_free(h) };
    }
}

#[test]
fn random_instances_are_reproducible() {
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(roabp_instance_random(10007, 4, 2, 2, 9, true, &mut a), RoabpStatus::Ok);
        assert_eq!(roabp_instance_random(10007, 4, 2, 2, 9, true, &mut b), RoabpStatus::Ok);
        let (mut va, mut vb) = (0, 0);
        let pt = [5u64, 6, 7, 8];
        roabp_instance_eval(a, pt.as_ptr(), 4, &mut va);
        roabp_instance_eval(b, pt.as_ptr(), 4, &mut vb);
        assert_eq!(va, vb);
        let mut verdict = RoabpVerdict::Zero;
        assert_eq!(roabp_pit_known_order(a, &mut verdict, ptr::null_mut()), RoabpStatus::Ok);
        assert_eq!(verdict, RoabpVerdict::Nonzero);
        roabp_instance_free(a);
        roabp_instance_free(b);
        assert_eq!(
            roabp_instance_random(8, 2, 1, 1, 0, false, &mut a),
            RoabpStatus::InvalidModulus
        );
    }
    let v = unsafe { CStr::from_ptr(roabp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_current() {
    let header = include_str!("../include/roabp_pit.h");
    for name in [
        "roabp_instance_parse",
        "roabp_instance_random",
        "roabp_instance_free",
        "roabp_instance_eval",
        "roabp_instance_serialize",
        "roabp_degree_bound",
        "roabp_hitting_set",
        "roabp_pit_known_order",
        "roabp_pit_commutative",
        "roabp_last_error_message",
        "typedef struct RoabpInstance RoabpInstance;",
        "ROABP_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
