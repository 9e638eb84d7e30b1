#!/usr/bin/env python3
# Copyright 2026 The LBLL Attack Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent networkx oracle for the per-latch features of a locked .bench file.

Prints one line per latch with the 14 features as exact fractions. Used to
produce the golden vectors in seqgraph_test.cpp from tests/data/ten_latch.bench.
"""
import re
import sys

import networkx as nx
from fractions import Fraction as F
lines=[l.strip() for l in open(sys.argv[1]) if l.strip()]
G=nx.DiGraph(); pis=[];pos=[];ffs={};lat={};gates={}
for l in lines:
    m=re.match(r'INPUT\((\w+)\)',l)
    if m: pis.append(m[1]); continue
    m=re.match(r'OUTPUT\((\w+)\)',l)
    if m: pos.append(m[1]); continue
    m=re.match(r'(\w+) = (\w+)\((.*)\)',l)
    o,t,args=m[1],m[2],[x.strip() for x in m[3].split(',')]
    if t=='DFF': ffs[o]=args[0]
    elif t=='LATCH': lat[o]=args[0]
    else: gates[o]=args
for o,a in gates.items():
    for x in a: G.add_edge(x,o)
latches=list(lat)
seq=[('PI',p,p) for p in pis]+[('PO',p,p) for p in pos]+[('FF',q,q) for q in ffs]+[('L',q,q) for q in latches]
# sinks: node name -> data net
sinks=[('PO',p,p) for p in pos]+[('FF',q,d) for q,d in ffs.items()]+[('L',q,d) for q,d in lat.items()]
def reach(net):
    s={net}
    if net in G: s|=nx.descendants(G,net)
    return s
succ={}
for k,name,_ in seq:
    if k=='PO': succ[(k,name)]=set(); continue
    r=reach(name)
    succ[(k,name)]={(sk,sn) for sk,sn,d in sinks if d in r}
pred={n:set() for n in succ}
for u,vs in succ.items():
    for v in vs: pred[v].add(u)
def lp_from(net):  # longest gate count net -> any sink data net
    best=-1
    for sk,sn,d in sinks:
        if d==net: best=max(best,0)
        elif net in G and d in G and nx.has_path(G,net,d):
            for p in nx.all_simple_paths(G,net,d): best=max(best,len(p)-1)
    return best
srcs=pis+list(ffs)+latches
def lp_to(net):
    best=-1
    for s in srcs:
        if s==net: best=max(best,0)
        elif s in G and net in G and nx.has_path(G,s,net):
            for p in nx.all_simple_paths(G,s,net): best=max(best,len(p)-1)
    return best
fo_d={q:lp_from(q) for q in latches}; fi_d={q:lp_to(lat[q]) for q in latches}
mfo=max(fo_d.values()); mfi=max(fi_d.values())
def frac(a,b): return F(a,b) if b else F(0)
for q in latches:
    n=('L',q); FI=pred[n]; FO=succ[n]
    tri=frac(sum(1 for v in FI if FO & succ[v]),len(FI))
    FO2=set().union(*[succ[v] for v in FO]) if FO else set()
    FI2=set().union(*[pred[v] for v in FI]) if FI else set()
    ta=frac(sum(1 for v in FI if succ[v]&FO2),len(FI))
    tb=frac(sum(1 for v in FO if pred[v]&FI2),len(FO))
    dfo=frac(max(fo_d[q],0),mfo) if mfo>0 else F(0)
    dfi=frac(max(fi_d[q],0),mfi) if mfi>0 else F(0)
    loop3=int(any(a!=n and b!=n and b!=a and n in succ[b] for a in FO for b in succ[a]))
    sf=int(len(FI)==1 or len(FO)==1)
    cnt=lambda S,k: sum(1 for v in S if v[0]==k)
    fsl=max([F(1,len(pred[v])) for v in FO if v[0]=='L' and v in succ[v]],default=F(0))
    vals=[tri,ta,tb,dfo,dfi,loop3,sf,cnt(FI,'L'),cnt(FI,'FF'),cnt(FI,'PI'),cnt(FO,'L'),cnt(FO,'FF'),cnt(FO,'PO'),fsl]
    print(q,' '.join(str(v) for v in vals))
