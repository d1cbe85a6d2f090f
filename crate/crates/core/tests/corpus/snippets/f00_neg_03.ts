const s = "x satisfies Y"; // a satisfies B
/* const c = d satisfies E; */
