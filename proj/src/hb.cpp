#include "wmm/hb.hpp"

namespace wmm {

void advance(ThreadHB& thr, Seq seq) {
    thr.C.set(thr.tid, seq);
    thr.lsb = seq;
}

StoreHB on_store(const ThreadHB& thr, Seq seq, MemOrder mo) {
    return {seq, is_release(mo) ? thr.C : thr.Frel};
}

void on_load(ThreadHB& thr, MemOrder mo, const StoreHB& rf) {
    if (is_acquire(mo)) {
        thr.C.merge(rf.RF);
    } else {
        thr.Facq.merge(rf.RF);
    }
}

StoreHB on_rmw(ThreadHB& thr, Seq seq, MemOrder mo, const StoreHB& rf) {
    on_load(thr, mo, rf);
    StoreHB out{seq, is_release(mo) ? thr.C : thr.Frel};
    out.RF.merge(rf.RF);
    return out;
}

void on_fence(ThreadHB& thr, MemOrder mo) {
    if (is_acquire(mo)) thr.C.merge(thr.Facq);
    if (is_release(mo)) thr.Frel = thr.C;
}

ThreadHB on_fork(const ThreadHB& parent, Tid child, Seq fork_seq) {
    ThreadHB out;
    out.tid = child;
    out.C = parent.C;
    out.C.set(child, fork_seq);
    out.lasw = fork_seq;
    return out;
}

void on_join(ThreadHB& parent, const ThreadHB& child, Seq join_seq) {
    parent.C.merge(child.C);
    parent.C.set(child.tid, join_seq);
    parent.lasw = join_seq;
}

}  // namespace wmm
