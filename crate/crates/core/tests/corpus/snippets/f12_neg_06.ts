const re = /a||=b/;
