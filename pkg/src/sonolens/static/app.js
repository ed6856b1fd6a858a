"use strict";(()=>{var L={scale:"db",showSpectrogram:!0,showRidge:!0,showVeins:!0,autoSelectN:4};function R(){return{selections:[],pairs:[],removed:[],next_order:1}}function S(e,t,r){for(let n of e.selections)if(n.plot_id===t&&Math.abs(n.peak.freq_hz-r)<=1e-9)return n;return null}function _(e,t){let r=e.selections.find(n=>n.selection_order===t);if(!r)throw new Error(`no live selection with order ${t}`);return r}function X(e,t){if(e<=0||t<=0)throw new Error(`frequencies must be positive, got ${e}, ${t}`);return Math.max(e,t)/Math.min(e,t)}function z(e,t){return Math.abs(e-Math.round(e))<=t}function G(e,t,r){return S(e,t,r.freq_hz)!==null?e:{...e,selections:[...e.selections,{plot_id:t,peak:r,selection_order:e.next_order}],next_order:e.next_order+1}}function C(e,t,r){let n=S(e,t,r);if(n===null)throw new Error(`no selection at ${r} Hz on plot ${t}`);return{...e,selections:e.selections.filter(i=>i.selection_order!==n.selection_order),pairs:e.pairs.filter(i=>i.order_a!==n.selection_order&&i.order_b!==n.selection_order)}}function Y(e,t,r){let n=e;return S(e,t,r)!==null&&(n=C(e,t,r)),{...n,removed:[...n.removed,[t,r]]}}function Z(e,t,r){let n=_(e,t),i=_(e,r),l=X(n.peak.freq_hz,i.peak.freq_hz);return{...e,pairs:[...e.pairs,{order_a:t,order_b:r,ratio:l}]}}function P(e,t){switch(t[0]){case"select":return G(e,t[1],t[2]);case"deselect":return C(e,t[1],t[2]);case"remove":return Y(e,t[1],t[2]);case"pair":return Z(e,t[1],t[2]);default:throw new Error(`unknown event ${t[0]}`)}}var D=["#d62728","#1f77b4","#2ca02c","#ff7f0e","#9467bd","#8c564b","#e377c2","#7f7f7f","#bcbd22","#17becf"];function T(e){return D[(e-1)%D.length]}var ee="sonolens:";function A(e){return ee+e}function j(e,t,r){e.setItem(A(t),JSON.stringify(r))}function N(e,t){let r=e.getItem(A(t));if(r===null)return null;try{let n=JSON.parse(r);return typeof n!="object"||n===null||typeof n.revision!="number"||typeof n.state!="object"||typeof n.view!="object"?null:n}catch{return null}}function $(){return{state:R(),view:{...L},revision:0}}var x=class{constructor(){this.map=new Map}getItem(t){return this.map.has(t)?this.map.get(t):null}setItem(t,r){this.map.set(t,r)}removeItem(t){this.map.delete(t)}};var te=12;function ne(e,t,r,n=te){let i=null,l=1/0;for(let s of e){let o=Math.hypot(s.px-t,s.py-r);o<l&&(l=o,i=s)}return l<=n?i:null}function re(e){return e.selections.length===0?null:Math.max(...e.selections.map(t=>t.selection_order))}function V(e,t,r,n){let i=ne(t,n.px,n.py);if(i===null)return{state:e,events:[]};let l=r.get(i.plotId)?.find(a=>a.freq_hz===i.freqHz);if(!l)return{state:e,events:[]};let s=[];if(n.clickCount>=2)s.push(["remove",i.plotId,l.freq_hz]);else if(n.button==="left")S(e,i.plotId,l.freq_hz)!==null?s.push(["deselect",i.plotId,l.freq_hz]):s.push(["select",i.plotId,l]);else{let a=re(e);if(a===null)return{state:e,events:[]};let p=e,u=S(p,i.plotId,l.freq_hz);u===null&&(s.push(["select",i.plotId,l]),p=P(p,s[0]),u=S(p,i.plotId,l.freq_hz)),u!==null&&u.selection_order!==a&&s.push(["pair",a,u.selection_order])}let o=e;for(let a of s)o=P(o,a);return{state:o,events:s}}var y=24,k=16;function E(e,t){return t==="db"?e.psd_db:e.psd_linear}function oe(e,t){let r=e.freqs_hz,n=Math.min(...r),i=Math.max(...r);i<=n&&(i=n+1);let l=E(e,t),s=Math.min(...l),o=Math.max(...l);o<=s&&(o=s+1);let a=.05*(o-s);return{freqRange:[n,i],valueRange:[s-a,o+a]}}function F(e,t,r,n,i){let l=e.length;if(l===0)return[];let s=Math.max(1,Math.min(i,l)),o=Math.ceil(l/s),a=Math.floor((r-2*y-(s-1)*k)/s),p=Math.floor((n-2*y-(o-1)*k)/o);return e.map((u,d)=>{let b=Math.floor(d/s),h=d%s,g=oe(u,t.scale);return{plotId:u.plot_id,x:y+h*(a+k),y:y+b*(p+k),w:a,h:p,freqRange:g.freqRange,valueRange:g.valueRange}})}function M(e,t){let[r,n]=e.freqRange;return e.x+(t-r)/(n-r)*e.w}function I(e,t){let[r,n]=e.valueRange;return e.y+e.h-(t-r)/(n-r)*e.h}function O(e,t,r,n){let i=new Set(r.removed.filter(([o])=>o===e.plot_id).map(([,o])=>o)),l=new Map(r.selections.filter(o=>o.plot_id===e.plot_id).map(o=>[o.peak.freq_hz,o.selection_order])),s=[];for(let o of e.peaks){if(i.has(o.freq_hz))continue;let a=l.get(o.freq_hz)??null;s.push({plotId:e.plot_id,freqHz:o.freq_hz,px:M(t,o.freq_hz),py:I(t,n==="db"?o.power_db:o.power_linear),kind:a===null?"peak":"selected",color:a===null?"#8c8c8c":T(a),order:a})}return s}function H(e,t){let r=(i,l)=>t.get(i)?.find(s=>s.freqHz===l),n=[];for(let i of e.pairs){let l=e.selections.find(p=>p.selection_order===i.order_a),s=e.selections.find(p=>p.selection_order===i.order_b);if(!l||!s)continue;let o=r(l.plot_id,l.peak.freq_hz),a=r(s.plot_id,s.peak.freq_hz);!o||!a||n.push({ax:o.px,ay:o.py,bx:a.px,by:a.py,ratioLabel:i.ratio.toFixed(3)})}return n}function f(e){if(!Number.isFinite(e))throw new Error(`cannot format ${e}`);let t=e<0||Object.is(e,-0),r=Math.abs(e);if(r===0)return(t?"-":"")+"0.00000";let[n,i]=r.toExponential(5).split("e"),l=parseInt(i,10);if(l<-4||l>=6){let s=Math.abs(l),o=(s<10?"0":"")+s;return`${t?"-":""}${n}e${l<0?"-":"+"}${o}`}return(t?"-":"")+ie(n,l)}function ie(e,t){let r=e.replace(".","");return t>=5?r+".":t>=0?r.slice(0,t+1)+"."+r.slice(t+1):"0."+"0".repeat(-t-1)+r}function U(e){return e?"true":"false"}var se="plot_id,clip_id,method,selection_order,freq_hz,power_linear,power_db,width_hz,prominence",le="pair_id,freq_a_hz,freq_b_hz,ratio,is_near_integer";function ae(e,t){let r=new Map(t.map(n=>[n.plot_id,n]));return e.selections.map(n=>{let i=r.get(n.plot_id);return[n.plot_id,i?i.clip_id:n.plot_id,i?i.method:"",String(n.selection_order),f(n.peak.freq_hz),f(n.peak.power_linear),f(n.peak.power_db),f(n.peak.width_hz),f(n.peak.prominence)]})}function ce(e,t){return e.pairs.map((r,n)=>{let i=_(e,r.order_a).peak.freq_hz,l=_(e,r.order_b).peak.freq_hz;return[String(n),f(i),f(l),f(r.ratio),U(z(r.ratio,t))]})}function B(e,t){return[se,...ae(e,t).map(n=>n.join(","))].join(`
`)+`
`}function J(e,t){return[le,...ce(e,t).map(n=>n.join(","))].join(`
`)+`
`}var K="default";function ue(){let e=document.getElementById("session-data");if(!e||!e.textContent)return null;try{return JSON.parse(e.textContent)}catch{return null}}function pe(){try{return window.localStorage.setItem("sonolens:probe","1"),window.localStorage.removeItem("sonolens:probe"),window.localStorage}catch{return new x}}function me(e){return{selections:e.selections,pairs:e.pairs,removed:e.removed,next_order:e.next_order}}function Q(e,t){let r=document.createElement("div"),n=document.createElement("h2");n.textContent=t,r.appendChild(n);let i=document.createElement("table");return e.trim().split(`
`).forEach((s,o)=>{let a=document.createElement("tr");for(let p of s.split(",")){let u=document.createElement(o===0?"th":"td");u.textContent=p,a.appendChild(u)}i.appendChild(a)}),r.appendChild(i),r}function de(e,t,r,n,i,l){e.clearRect(0,0,e.canvas.width,e.canvas.height);let s=new Map(t.plots.map(o=>[o.plot_id,o]));for(let o of r){let a=s.get(o.plotId);if(!a)continue;e.strokeStyle="#444",e.strokeRect(o.x,o.y,o.w,o.h),e.fillStyle="#222",e.font="11px sans-serif",e.fillText(`${a.clip_id} \xB7 ${a.method}`,o.x+4,o.y+12);let p=E(a,l);e.strokeStyle="#1f77b4",e.beginPath(),a.freqs_hz.forEach((u,d)=>{let b=M(o,u),h=I(o,p[d]);d===0?e.moveTo(b,h):e.lineTo(b,h)}),e.stroke();for(let u of n.get(o.plotId)??[])e.fillStyle=u.color,e.beginPath(),e.arc(u.px,u.py,u.kind==="selected"?5:3,0,2*Math.PI),e.fill()}e.strokeStyle="#d62728",e.fillStyle="#d62728";for(let o of H(i,n))e.beginPath(),e.moveTo(o.ax,o.ay),e.lineTo(o.bx,o.by),e.stroke(),e.fillText(o.ratioLabel,(o.ax+o.bx)/2,(o.ay+o.by)/2-4)}function fe(e){let t=ue();if(t===null){e.textContent="No session data found in this page.";return}let r=pe(),n=N(r,K)??(()=>{let c=$();return c.state=me(t),c})(),i=n.state,l=n.view,s=document.createElement("canvas");s.width=Math.max(640,e.clientWidth||960),s.height=600;let o=document.createElement("div"),a=document.createElement("p");a.textContent="left click: select/deselect peak \xB7 right click: pair with latest selection \xB7 double click: remove peak \xB7 press s: toggle scale",e.appendChild(a),e.appendChild(s),e.appendChild(o);let p=s.getContext("2d");if(!p)return;let u=new Map(t.plots.map(c=>[c.plot_id,c.peaks])),d=[],b=new Map,h=()=>{d=F(t.plots,l,s.width,s.height,2);let c=new Map(t.plots.map(m=>[m.plot_id,m]));b=new Map(d.map(m=>[m.plotId,O(c.get(m.plotId),m,i,l.scale)])),de(p,t,d,b,i,l.scale),o.replaceChildren(Q(B(i,t.plots),"Selected peaks"),Q(J(i,t.integer_tolerance),"Ratio pairs"))},g=()=>{j(r,K,{state:i,view:l,revision:n.revision})},v=c=>{let m=Array.from(b.values()).flat(),q=V(i,m,u,c);q.events.length!==0&&(i=q.state,g(),h())},w=c=>{let m=s.getBoundingClientRect();return{px:c.clientX-m.left,py:c.clientY-m.top}};s.addEventListener("click",c=>v({button:"left",clickCount:1,...w(c)})),s.addEventListener("dblclick",c=>v({button:"left",clickCount:2,...w(c)})),s.addEventListener("contextmenu",c=>{c.preventDefault(),v({button:"right",clickCount:1,...w(c)})}),window.addEventListener("keydown",c=>{c.key==="s"?(l.scale=l.scale==="db"?"linear":"db",g(),h()):c.key>="1"&&c.key<="5"&&(l.autoSelectN=Number(c.key),g())}),h()}var W=document.getElementById("app");W&&fe(W);})();
